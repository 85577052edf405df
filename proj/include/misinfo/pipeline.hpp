#ifndef MISINFO_PIPELINE_HPP
#define MISINFO_PIPELINE_HPP

#include "misinfo/acoustic_features.hpp"
#include "misinfo/corpus.hpp"
#include "misinfo/engagement_features.hpp"
#include "misinfo/feature_matrix.hpp"
#include "misinfo/linguistic_features.hpp"
#include "misinfo/resources.hpp"
#include "misinfo/text_annotation.hpp"
#include "misinfo/tfidf.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace misinfo {

/// Word lists and options shared by every extractor of a run.
struct ExtractionResources {
    std::optional<Lexicon> lexicon;
    std::optional<RankedWordList> wordlist;
    std::optional<WordSet> familiar_words;
    EngagementOptions engagement;
    LexRichOptions lexrich;
    AcousticOptions acoustic;

    /// Throws ValidationError naming the resource an enabled block lacks.
    void require(std::span<const BlockKind> blocks) const;
};

/// Sorted into canonical fusion order, duplicates removed. Throws on an
/// empty selection.
[[nodiscard]] std::vector<BlockKind> canonical_blocks(std::span<const BlockKind> blocks);

/// Comma-separated names; throws ValidationError naming the valid blocks on
/// an unknown one.
[[nodiscard]] std::vector<BlockKind> parse_block_list(std::string_view text);
[[nodiscard]] std::string format_block_list(std::span<const BlockKind> blocks);

/// Optional store for fixed-layout blocks, consulted before extraction.
class BlockCache {
  public:
    virtual ~BlockCache() = default;
    [[nodiscard]] virtual std::optional<FeatureBlock> load(const VideoRecord &record, BlockKind kind) = 0;
    virtual void store(const VideoRecord &record, BlockKind kind, const FeatureBlock &block) = 0;
};

/// Everything fold-independent about one record: fixed-layout blocks, the
/// raw terms of the vocabulary blocks, and why any block is unavailable.
struct PreparedRecord {
    std::string id;
    Label label{Label::Trustworthy};
    std::optional<std::vector<std::string>> ngram_terms;
    std::optional<std::vector<std::string>> syntax_terms;
    std::map<BlockKind, FeatureBlock> blocks;
    std::map<BlockKind, std::string> unavailable;

    [[nodiscard]] bool has(BlockKind kind) const;
};

struct SkipEntry {
    std::string id;
    BlockKind block{BlockKind::Engagement};
    std::string reason;
};

struct PreparedCorpus {
    std::vector<PreparedRecord> records;

    [[nodiscard]] std::vector<Label> labels() const;
    [[nodiscard]] std::vector<std::string> ids() const;
    /// One entry per (record, enabled block) that cannot be extracted.
    [[nodiscard]] std::vector<SkipEntry> skip_report(std::span<const BlockKind> blocks) const;
    /// Members of `indices` whose every enabled block is available.
    [[nodiscard]] std::vector<std::size_t> usable(std::span<const std::size_t> indices,
                                                  std::span<const BlockKind> blocks) const;
};

/// Runs fn(0..n-1) on up to `jobs` threads; the first exception is rethrown.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)> &fn);

/// Text annotation with POS from pos_lines, or from parse-tree leaves when
/// those align with the tokenizer. When no tags can be attached the text is
/// returned untagged and `pos_issue` (if given) receives the reason.
[[nodiscard]] AnnotatedText annotate_record(const VideoRecord &record, std::string *pos_issue = nullptr);

/// Feature names of a fixed-layout block under these resources.
[[nodiscard]] FeatureNames fixed_block_names(BlockKind kind, const ExtractionResources &resources);

/// Fixed-layout block of one record. Throws MissingModalityError or
/// ValidationError when it cannot be built.
[[nodiscard]] FeatureBlock extract_fixed_block(const VideoRecord &record, const AnnotatedText &annotated,
                                               BlockKind kind, const ExtractionResources &resources);

/// Extraction failures are recorded per block, never thrown.
[[nodiscard]] PreparedRecord prepare_record(const VideoRecord &record, std::span<const BlockKind> blocks,
                                            const ExtractionResources &resources, BlockCache *cache = nullptr);

[[nodiscard]] PreparedCorpus prepare_corpus(const std::vector<VideoRecord> &records, std::span<const BlockKind> blocks,
                                            const ExtractionResources &resources, std::size_t jobs = 1,
                                            BlockCache *cache = nullptr);

/// Vocabularies of one fold, fitted on training records only.
struct FoldContext {
    std::optional<SparseVocab> ngrams;
    std::optional<SparseVocab> syntax;
};

[[nodiscard]] FoldContext fit_fold_context(const PreparedCorpus &corpus, std::span<const std::size_t> train,
                                           std::span<const BlockKind> blocks,
                                           std::uint64_t min_total_freq = kDefaultMinTotalFreq);

/// Fused matrix over `indices`; every listed record must have every block.
[[nodiscard]] FeatureMatrix assemble(const PreparedCorpus &corpus, std::span<const std::size_t> indices,
                                     std::span<const BlockKind> blocks, const FoldContext &context,
                                     std::vector<std::string> *warnings = nullptr);

/// Hash over every input that feeds extraction of this record.
[[nodiscard]] std::string record_content_hash(const VideoRecord &record);

[[nodiscard]] nlohmann::json block_to_json(const FeatureBlock &block);
[[nodiscard]] FeatureBlock block_from_json(const nlohmann::json &json, FeatureNames names);

}  // namespace misinfo

#endif  // MISINFO_PIPELINE_HPP
