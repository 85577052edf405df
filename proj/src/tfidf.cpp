#include "misinfo/tfidf.hpp"

#include "misinfo/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace misinfo {

namespace {

const std::vector<std::string> kNoTerms;

}  // namespace

const std::vector<std::string> &SparseVocab::terms() const { return terms_ ? *terms_ : kNoTerms; }

std::optional<std::uint32_t> SparseVocab::index_of(std::string_view term) const {
    const auto &all = terms();
    const auto it = std::lower_bound(all.begin(), all.end(), term,
                                     [](const std::string &a, std::string_view b) { return std::string_view(a) < b; });
    if (it == all.end() || *it != term) {
        return std::nullopt;
    }
    return static_cast<std::uint32_t>(it - all.begin());
}

double SparseVocab::idf(std::uint32_t index) const {
    return std::log((1.0 + static_cast<double>(n_docs_)) / (1.0 + static_cast<double>(doc_freq_.at(index)))) + 1.0;
}

bool operator==(const SparseVocab &a, const SparseVocab &b) {
    return a.terms() == b.terms() && a.doc_freq_ == b.doc_freq_ && a.total_freq_ == b.total_freq_ &&
           a.n_docs_ == b.n_docs_ && a.min_total_freq_ == b.min_total_freq_;
}

SparseVocab SparseVocab::from_parts(std::vector<std::string> terms, std::vector<std::uint64_t> doc_freq,
                                    std::vector<std::uint64_t> total_freq, std::size_t n_docs,
                                    std::uint64_t min_total_freq) {
    if (doc_freq.size() != terms.size() || total_freq.size() != terms.size()) {
        throw ValidationError("vocabulary parts have mismatched lengths");
    }
    if (!std::is_sorted(terms.begin(), terms.end()) ||
        std::adjacent_find(terms.begin(), terms.end()) != terms.end()) {
        throw ValidationError("vocabulary terms must be strictly increasing");
    }
    SparseVocab vocab;
    vocab.terms_ = std::make_shared<const std::vector<std::string>>(std::move(terms));
    vocab.doc_freq_ = std::move(doc_freq);
    vocab.total_freq_ = std::move(total_freq);
    vocab.n_docs_ = n_docs;
    vocab.min_total_freq_ = min_total_freq;
    return vocab;
}

SparseVocab fit_tfidf_vocab(std::span<const std::vector<std::string>> term_lists, std::uint64_t min_total_freq) {
    if (term_lists.empty()) {
        throw ValidationError("fit_tfidf_vocab: empty corpus");
    }
    if (min_total_freq < 1) {
        throw ValidationError("fit_tfidf_vocab: min_total_freq must be >= 1");
    }
    struct Counts {
        std::uint64_t total{0};
        std::uint64_t docs{0};
    };
    std::map<std::string, Counts, std::less<>> counts;
    for (const auto &doc : term_lists) {
        std::set<std::string_view> seen;
        for (const auto &term : doc) {
            auto &c = counts[term];
            ++c.total;
            if (seen.insert(term).second) {
                ++c.docs;
            }
        }
    }
    std::vector<std::string> terms;
    std::vector<std::uint64_t> doc_freq;
    std::vector<std::uint64_t> total_freq;
    for (const auto &[term, c] : counts) {
        if (c.total >= min_total_freq) {
            terms.push_back(term);
            doc_freq.push_back(c.docs);
            total_freq.push_back(c.total);
        }
    }
    return SparseVocab::from_parts(std::move(terms), std::move(doc_freq), std::move(total_freq), term_lists.size(),
                                   min_total_freq);
}

FeatureBlock tfidf_vector(std::span<const std::string> terms, const SparseVocab &vocab, BlockKind kind) {
    std::map<std::uint32_t, std::uint64_t> counts;
    for (const auto &term : terms) {
        if (const auto index = vocab.index_of(term)) {
            ++counts[*index];
        }
    }
    SparseVector values;
    values.indices.reserve(counts.size());
    values.values.reserve(counts.size());
    for (const auto &[index, count] : counts) {
        values.indices.push_back(index);
        values.values.push_back(static_cast<double>(count) * vocab.idf(index));
    }
    auto names = vocab.names() ? vocab.names() : std::make_shared<const std::vector<std::string>>();
    return make_sparse_block(kind, std::move(names), std::move(values));
}

std::vector<std::string> ngram_terms(const AnnotatedText &annotated) {
    std::vector<std::string> unigrams;
    std::vector<std::string> bigrams;
    for (const auto &sentence : annotated.sentences) {
        const std::string *previous = nullptr;
        for (const auto &token : sentence) {
            if (!token.is_word()) {
                continue;
            }
            unigrams.push_back(token.lower);
            if (previous != nullptr) {
                bigrams.push_back(*previous + "_" + token.lower);
            }
            previous = &token.lower;
        }
    }
    unigrams.insert(unigrams.end(), std::make_move_iterator(bigrams.begin()), std::make_move_iterator(bigrams.end()));
    return unigrams;
}

std::vector<std::string> syntax_terms(std::span<const ParseTree> trees) {
    std::vector<std::string> out;
    for (const auto &tree : trees) {
        for (auto &feature : extract_productions(tree)) {
            out.push_back(std::move(feature.rendered));
        }
    }
    return out;
}

FeatureBlock syntax_features(const std::optional<std::vector<ParseTree>> &trees, const SparseVocab &vocab) {
    if (!trees) {
        throw MissingModalityError("record has no parse trees");
    }
    const auto terms = syntax_terms(*trees);
    return tfidf_vector(terms, vocab, BlockKind::Syntax);
}

}  // namespace misinfo
