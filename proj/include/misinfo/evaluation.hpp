#ifndef MISINFO_EVALUATION_HPP
#define MISINFO_EVALUATION_HPP

#include "misinfo/classifier.hpp"
#include "misinfo/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace misinfo {

inline constexpr std::uint64_t kDefaultSeed = 20190418;

struct FoldPlan {
    std::size_t k{5};
    std::uint64_t seed{kDefaultSeed};
    std::vector<std::string> ids;
    std::vector<std::size_t> assignments;  // fold of ids[i]

    [[nodiscard]] std::vector<std::size_t> test_indices(std::size_t fold) const;
    [[nodiscard]] std::vector<std::size_t> train_indices(std::size_t fold) const;
    friend bool operator==(const FoldPlan &, const FoldPlan &) = default;
};

/// Each class is shuffled with the seeded generator, then dealt to folds
/// round-robin; the deal position carries over from one class to the next,
/// so fold sizes differ by at most one overall as well as per class.
[[nodiscard]] FoldPlan stratified_kfold(std::span<const std::string> ids, std::span<const Label> labels, std::size_t k,
                                        std::uint64_t seed);

/// Counts with Misinformative as the positive class.
struct Confusion {
    std::size_t tp{0};
    std::size_t fp{0};
    std::size_t fn{0};
    std::size_t tn{0};

    [[nodiscard]] std::size_t total() const { return tp + fp + fn + tn; }
    void add(Label truth, Label predicted);
    Confusion &operator+=(const Confusion &other);
    friend bool operator==(const Confusion &, const Confusion &) = default;
};

struct ClassMetrics {
    double precision{0.0};
    double recall{0.0};
    double f1{0.0};
};

struct Metrics {
    double accuracy{0.0};
    ClassMetrics misinformative;
    ClassMetrics trustworthy;
    std::vector<std::string> flags;  // e.g. "misinformative.precision undefined, set to 0"
};

/// Zero denominators give 0 and a flag. Throws on an empty confusion.
[[nodiscard]] Metrics metrics(const Confusion &confusion);

struct FoldResult {
    std::size_t fold{0};
    std::size_t n_train{0};
    std::size_t n_test{0};
    std::size_t n_features{0};
    Confusion confusion;
    Metrics metrics;
    std::size_t epochs_run{0};
    double primal_objective{0.0};
    double duality_gap{0.0};
};

struct EvalReport {
    std::string name;
    std::vector<BlockKind> blocks;
    std::vector<FoldResult> folds;
    Metrics macro;   // unweighted mean over folds
    Metrics pooled;  // from the summed confusion
    double mean_n_features{0.0};
    std::vector<SkipEntry> skipped;
};

struct EvalOptions {
    SvmConfig svm;
    std::uint64_t min_total_freq{kDefaultMinTotalFreq};
    bool per_column_norm{false};
    std::size_t jobs{1};
};

/// Per fold: fit vocabularies on the training split, assemble, train, and
/// predict the test split. Records lacking an enabled block are left out of
/// both splits and listed in `skipped`.
[[nodiscard]] EvalReport evaluate_cv(const PreparedCorpus &corpus, std::span<const BlockKind> blocks,
                                     const FoldPlan &plan, const EvalOptions &options, std::string name = {});

/// Always predicts the majority class of each training split.
[[nodiscard]] EvalReport majority_baseline(std::span<const Label> labels, const FoldPlan &plan);

struct AblationConfig {
    std::string name;
    std::vector<BlockKind> blocks;
};

/// Each block alone, all linguistic blocks, engagement+ngrams+acoustic and
/// engagement+linguistic+acoustic.
[[nodiscard]] std::vector<AblationConfig> default_ablation_configs();

/// Parses "name=block,block;name=block"; a bare block list names itself.
[[nodiscard]] std::vector<AblationConfig> parse_ablation_configs(std::string_view text);

/// Every config runs on the same plan.
[[nodiscard]] std::vector<EvalReport> ablation_suite(const PreparedCorpus &corpus,
                                                     std::span<const AblationConfig> configs, const FoldPlan &plan,
                                                     const EvalOptions &options);

enum class Aggregation { Macro, Pooled };

/// Tab-separated table, one row per report, preceded by '#' header lines.
[[nodiscard]] std::string format_report_table(std::span<const EvalReport> reports,
                                              std::span<const std::string> header_lines,
                                              Aggregation aggregation = Aggregation::Macro);

[[nodiscard]] nlohmann::json report_to_json(const EvalReport &report);
/// Inverse of report_to_json; skip reasons and fold metrics are restored too.
[[nodiscard]] EvalReport report_from_json(const nlohmann::json &json);
[[nodiscard]] nlohmann::json plan_to_json(const FoldPlan &plan);

}  // namespace misinfo

#endif  // MISINFO_EVALUATION_HPP
