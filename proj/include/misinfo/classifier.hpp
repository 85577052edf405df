#ifndef MISINFO_CLASSIFIER_HPP
#define MISINFO_CLASSIFIER_HPP

#include "misinfo/corpus.hpp"
#include "misinfo/feature_matrix.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace misinfo {

struct SvmConfig {
    double c_param{1.0};
    std::uint64_t seed{20190418};
    double tol{1e-4};
    std::size_t max_epochs{10000};

    void validate() const;
};

struct EpochSnapshot {
    std::size_t epoch{0};
    double primal{0.0};          // objective of the model kept so far
    double iterate_primal{0.0};  // objective of the current dual-consistent iterate
    double dual{0.0};
    double max_violation{0.0};
};

struct TrainingDiagnostics {
    std::size_t epochs_run{0};
    bool converged{false};
    double primal_objective{0.0};
    double dual_objective{0.0};
    double duality_gap{0.0};
    std::vector<EpochSnapshot> history;
};

/// Linear decision function over a frozen feature layout.
///
/// Training runs dual coordinate descent on the hinge loss with the bias as
/// an extra constant-1 feature, so the objective is
///   0.5 (|w|^2 + b^2) + C sum_i max(0, 1 - y_i (w.x_i + b)).
/// Coordinate steps only ever raise the dual, not the primal; after every
/// epoch the primal objective of the current iterate is compared with the
/// best seen so far and the better one is kept. `dual` holds the final
/// multipliers, which certify the kept weights through the duality gap.
struct LinearModel {
    std::vector<std::string> feature_names;
    std::vector<double> weights;
    double bias{0.0};
    double c_param{1.0};
    std::uint64_t seed{0};
    double tol{0.0};
    TrainingDiagnostics diagnostics;
    std::vector<double> dual;            // not persisted
    nlohmann::json block_config = nlohmann::json::object();
};

struct Prediction {
    Label label{Label::Trustworthy};
    double margin_score{0.0};
};

/// +1 for Misinformative, -1 for Trustworthy.
[[nodiscard]] constexpr double label_sign(Label label) { return label == Label::Misinformative ? 1.0 : -1.0; }

[[nodiscard]] LinearModel train_linear_svm(const FeatureMatrix &x, std::span<const Label> y, const SvmConfig &config);

/// Zero margin maps to Trustworthy.
[[nodiscard]] Prediction predict(const LinearModel &model, std::span<const double> row);
[[nodiscard]] Prediction predict(const LinearModel &model, const SparseRow &row);

[[nodiscard]] double primal_objective(std::span<const double> weights, double bias, const FeatureMatrix &x,
                                      std::span<const Label> y, double c_param);

/// Dual objective sum(alpha) - 0.5 |sum_i alpha_i y_i (x_i, 1)|^2; alpha must lie in [0, C].
[[nodiscard]] double dual_objective(std::span<const double> alpha, const FeatureMatrix &x, std::span<const Label> y,
                                    double c_param);

/// Primal minus dual. Rounding residue below 1e-12 relative is reported as 0.
[[nodiscard]] double duality_gap(std::span<const double> weights, double bias, std::span<const double> alpha,
                                 const FeatureMatrix &x, std::span<const Label> y, double c_param);
[[nodiscard]] double duality_gap(const LinearModel &model, const FeatureMatrix &x, std::span<const Label> y);

inline constexpr int kModelFormatVersion = 1;

[[nodiscard]] nlohmann::json model_to_json(const LinearModel &model);
[[nodiscard]] LinearModel model_from_json(const nlohmann::json &json);
void save_model(const LinearModel &model, const std::filesystem::path &path);
[[nodiscard]] LinearModel load_model(const std::filesystem::path &path);

}  // namespace misinfo

#endif  // MISINFO_CLASSIFIER_HPP
