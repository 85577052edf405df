#ifndef MISINFO_TFIDF_HPP
#define MISINFO_TFIDF_HPP

#include "misinfo/feature_block.hpp"
#include "misinfo/parse_tree.hpp"
#include "misinfo/text_annotation.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace misinfo {

inline constexpr std::uint64_t kDefaultMinTotalFreq = 10;

/// Term -> column map fitted on a training split. Terms are kept in
/// lexicographic (byte) order, so the index of a term is its rank.
class SparseVocab {
  public:
    SparseVocab() = default;

    [[nodiscard]] std::size_t size() const { return terms_ ? terms_->size() : 0; }
    [[nodiscard]] const std::vector<std::string> &terms() const;
    [[nodiscard]] const FeatureNames &names() const { return terms_; }
    [[nodiscard]] std::optional<std::uint32_t> index_of(std::string_view term) const;
    [[nodiscard]] std::uint64_t doc_freq(std::uint32_t index) const { return doc_freq_.at(index); }
    [[nodiscard]] std::uint64_t total_freq(std::uint32_t index) const { return total_freq_.at(index); }
    [[nodiscard]] std::size_t n_docs() const { return n_docs_; }
    [[nodiscard]] std::uint64_t min_total_freq() const { return min_total_freq_; }

    /// ln((1 + n_docs) / (1 + doc_freq)) + 1
    [[nodiscard]] double idf(std::uint32_t index) const;

    friend bool operator==(const SparseVocab &a, const SparseVocab &b);

    friend SparseVocab fit_tfidf_vocab(std::span<const std::vector<std::string>> term_lists,
                                       std::uint64_t min_total_freq);
    static SparseVocab from_parts(std::vector<std::string> terms, std::vector<std::uint64_t> doc_freq,
                                  std::vector<std::uint64_t> total_freq, std::size_t n_docs,
                                  std::uint64_t min_total_freq);

  private:
    FeatureNames terms_;
    std::vector<std::uint64_t> doc_freq_;
    std::vector<std::uint64_t> total_freq_;
    std::size_t n_docs_{0};
    std::uint64_t min_total_freq_{1};
};

/// Keeps terms whose total occurrence count over all documents is at least
/// min_total_freq. Throws ValidationError on an empty corpus or threshold 0.
[[nodiscard]] SparseVocab fit_tfidf_vocab(std::span<const std::vector<std::string>> term_lists,
                                          std::uint64_t min_total_freq = kDefaultMinTotalFreq);

/// count(t) * idf(t) over in-vocabulary terms.
[[nodiscard]] FeatureBlock tfidf_vector(std::span<const std::string> terms, const SparseVocab &vocab,
                                        BlockKind kind = BlockKind::Ngrams);

/// Lowercased unigrams plus within-sentence bigrams joined by '_'; tokens
/// without letters or digits are dropped before pairing.
[[nodiscard]] std::vector<std::string> ngram_terms(const AnnotatedText &annotated);

/// Rendered production strings of every tree, in tree order.
[[nodiscard]] std::vector<std::string> syntax_terms(std::span<const ParseTree> trees);

/// tf-idf over production strings. Throws MissingModalityError when the
/// record has no parse trees.
[[nodiscard]] FeatureBlock syntax_features(const std::optional<std::vector<ParseTree>> &trees,
                                           const SparseVocab &vocab);

}  // namespace misinfo

#endif  // MISINFO_TFIDF_HPP
