#include "misinfo/classifier.hpp"

#include "misinfo/error.hpp"
#include "misinfo/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace misinfo {

namespace {

void check_training_inputs(const FeatureMatrix &x, std::span<const Label> y) {
    if (x.n_rows() != y.size()) {
        throw ValidationError(fmt::format("train: {} rows but {} labels", x.n_rows(), y.size()));
    }
    const auto positives = std::count(y.begin(), y.end(), Label::Misinformative);
    if (positives == 0 || static_cast<std::size_t>(positives) == y.size()) {
        throw ValidationError("train: labels contain a single class");
    }
    for (std::size_t i = 0; i < x.n_rows(); ++i) {
        const auto row = x.row(i);
        for (std::size_t k = 0; k < row.values.size(); ++k) {
            if (!std::isfinite(row.values[k])) {
                throw ValidationError(fmt::format("train: non-finite value in record '{}' column '{}'", x.row_ids()[i],
                                                  x.feature_names()[row.indices[k]]));
            }
        }
    }
}

double squared_norm(std::span<const double> v) {
    return std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
}

}  // namespace

void SvmConfig::validate() const {
    if (!(c_param > 0.0) || !std::isfinite(c_param)) {
        throw ValidationError(fmt::format("C must be a positive finite number, got {}", c_param));
    }
    if (!(tol > 0.0)) {
        throw ValidationError(fmt::format("tol must be positive, got {}", tol));
    }
    if (max_epochs == 0) {
        throw ValidationError("max_epochs must be at least 1");
    }
}

double primal_objective(std::span<const double> weights, double bias, const FeatureMatrix &x, std::span<const Label> y,
                        double c_param) {
    double hinge = 0.0;
    for (std::size_t i = 0; i < x.n_rows(); ++i) {
        const double margin = label_sign(y[i]) * (x.row(i).dot(weights) + bias);
        hinge += std::max(0.0, 1.0 - margin);
    }
    return 0.5 * (squared_norm(weights) + bias * bias) + c_param * hinge;
}

double dual_objective(std::span<const double> alpha, const FeatureMatrix &x, std::span<const Label> y,
                      double c_param) {
    if (alpha.size() != x.n_rows()) {
        throw ValidationError("dual_objective: one multiplier per row required");
    }
    std::vector<double> w(x.n_cols(), 0.0);
    double b = 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < x.n_rows(); ++i) {
        if (alpha[i] < 0.0 || alpha[i] > c_param) {
            throw ValidationError(fmt::format("dual_objective: alpha[{}] = {} outside [0, C]", i, alpha[i]));
        }
        sum += alpha[i];
        const double coef = alpha[i] * label_sign(y[i]);
        const auto row = x.row(i);
        for (std::size_t k = 0; k < row.indices.size(); ++k) {
            w[row.indices[k]] += coef * row.values[k];
        }
        b += coef;
    }
    return sum - 0.5 * (squared_norm(w) + b * b);
}

double duality_gap(std::span<const double> weights, double bias, std::span<const double> alpha, const FeatureMatrix &x,
                   std::span<const Label> y, double c_param) {
    const double primal = primal_objective(weights, bias, x, y, c_param);
    const double dual = dual_objective(alpha, x, y, c_param);
    const double gap = primal - dual;
    if (gap < 0.0 && -gap <= 1e-12 * std::max(1.0, std::abs(primal))) {
        return 0.0;
    }
    return gap;
}

double duality_gap(const LinearModel &model, const FeatureMatrix &x, std::span<const Label> y) {
    if (model.dual.size() != x.n_rows()) {
        throw ValidationError("duality_gap: model carries no dual variables for this matrix");
    }
    return duality_gap(model.weights, model.bias, model.dual, x, y, model.c_param);
}

LinearModel train_linear_svm(const FeatureMatrix &x, std::span<const Label> y, const SvmConfig &config) {
    config.validate();
    check_training_inputs(x, y);

    const std::size_t n = x.n_rows();
    const double c = config.c_param;
    std::vector<double> q_diag(n);
    for (std::size_t i = 0; i < n; ++i) {
        q_diag[i] = x.row(i).squared_norm() + 1.0;
    }

    std::vector<double> alpha(n, 0.0);
    std::vector<double> w(x.n_cols(), 0.0);
    double b = 0.0;

    LinearModel model;
    model.feature_names = x.feature_names();
    model.c_param = c;
    model.seed = config.seed;
    model.tol = config.tol;
    model.weights = w;
    model.bias = b;
    double best_primal = primal_objective(w, b, x, y, c);

    Rng rng(config.seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto &diag = model.diagnostics;

    for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
        shuffle_in_place(std::span(order), rng);
        double max_violation = 0.0;
        for (const auto i : order) {
            const auto row = x.row(i);
            const double yi = label_sign(y[i]);
            const double grad = yi * (row.dot(w) + b) - 1.0;
            double projected = grad;
            if (alpha[i] == 0.0) {
                projected = std::min(grad, 0.0);
            } else if (alpha[i] == c) {
                projected = std::max(grad, 0.0);
            }
            max_violation = std::max(max_violation, std::abs(projected));
            if (projected == 0.0) {
                continue;
            }
            const double updated = std::clamp(alpha[i] - grad / q_diag[i], 0.0, c);
            const double step = (updated - alpha[i]) * yi;
            alpha[i] = updated;
            for (std::size_t k = 0; k < row.indices.size(); ++k) {
                w[row.indices[k]] += step * row.values[k];
            }
            b += step;
        }

        EpochSnapshot snapshot;
        snapshot.epoch = epoch;
        snapshot.max_violation = max_violation;
        snapshot.iterate_primal = primal_objective(w, b, x, y, c);
        snapshot.dual = dual_objective(alpha, x, y, c);
        if (snapshot.iterate_primal <= best_primal) {
            best_primal = snapshot.iterate_primal;
            model.weights = w;
            model.bias = b;
        }
        snapshot.primal = best_primal;
        diag.history.push_back(snapshot);
        diag.epochs_run = epoch;
        if (max_violation < config.tol) {
            diag.converged = true;
            break;
        }
    }

    model.dual = std::move(alpha);
    diag.primal_objective = best_primal;
    diag.dual_objective = diag.history.back().dual;
    diag.duality_gap = duality_gap(model, x, y);
    return model;
}

Prediction predict(const LinearModel &model, std::span<const double> row) {
    if (row.size() != model.weights.size()) {
        throw ValidationError(
            fmt::format("predict: row has {} features, model expects {}", row.size(), model.weights.size()));
    }
    const double score = std::inner_product(row.begin(), row.end(), model.weights.begin(), 0.0) + model.bias;
    return {score > 0.0 ? Label::Misinformative : Label::Trustworthy, score};
}

Prediction predict(const LinearModel &model, const SparseRow &row) {
    if (!row.indices.empty() && row.indices.back() >= model.weights.size()) {
        throw ValidationError(fmt::format("predict: column {} outside the model's {} features", row.indices.back(),
                                          model.weights.size()));
    }
    const double score = row.dot(model.weights) + model.bias;
    return {score > 0.0 ? Label::Misinformative : Label::Trustworthy, score};
}

nlohmann::json model_to_json(const LinearModel &model) {
    nlohmann::json weights = nlohmann::json::array();
    for (std::size_t j = 0; j < model.weights.size(); ++j) {
        if (model.weights[j] != 0.0) {
            weights.push_back({j, model.weights[j]});
        }
    }
    nlohmann::json history = nlohmann::json::array();
    for (const auto &s : model.diagnostics.history) {
        history.push_back({{"epoch", s.epoch},
                           {"primal", s.primal},
                           {"iterate_primal", s.iterate_primal},
                           {"dual", s.dual},
                           {"max_violation", s.max_violation}});
    }
    return {{"format_version", kModelFormatVersion},
            {"block_config", model.block_config},
            {"feature_names", model.feature_names},
            {"weights", weights},
            {"bias", model.bias},
            {"c_param", model.c_param},
            {"seed", model.seed},
            {"tol", model.tol},
            {"diagnostics",
             {{"epochs_run", model.diagnostics.epochs_run},
              {"converged", model.diagnostics.converged},
              {"primal_objective", model.diagnostics.primal_objective},
              {"dual_objective", model.diagnostics.dual_objective},
              {"duality_gap", model.diagnostics.duality_gap},
              {"history", history}}}};
}

LinearModel model_from_json(const nlohmann::json &json) {
    const auto version = json.value("format_version", -1);
    if (version != kModelFormatVersion) {
        throw ValidationError(
            fmt::format("model format version {} is not supported (expected {})", version, kModelFormatVersion));
    }
    try {
        LinearModel model;
        model.block_config = json.at("block_config");
        model.feature_names = json.at("feature_names").get<std::vector<std::string>>();
        model.weights.assign(model.feature_names.size(), 0.0);
        for (const auto &pair : json.at("weights")) {
            const auto index = pair.at(0).get<std::size_t>();
            if (index >= model.weights.size()) {
                throw ValidationError(fmt::format("model weight index {} out of range", index));
            }
            model.weights[index] = pair.at(1).get<double>();
        }
        model.bias = json.at("bias").get<double>();
        model.c_param = json.at("c_param").get<double>();
        model.seed = json.at("seed").get<std::uint64_t>();
        model.tol = json.at("tol").get<double>();
        const auto &diag = json.at("diagnostics");
        model.diagnostics.epochs_run = diag.at("epochs_run").get<std::size_t>();
        model.diagnostics.converged = diag.at("converged").get<bool>();
        model.diagnostics.primal_objective = diag.at("primal_objective").get<double>();
        model.diagnostics.dual_objective = diag.at("dual_objective").get<double>();
        model.diagnostics.duality_gap = diag.at("duality_gap").get<double>();
        for (const auto &s : diag.at("history")) {
            model.diagnostics.history.push_back({s.at("epoch").get<std::size_t>(), s.at("primal").get<double>(),
                                                 s.at("iterate_primal").get<double>(), s.at("dual").get<double>(),
                                                 s.at("max_violation").get<double>()});
        }
        return model;
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(fmt::format("malformed model file: {}", e.what()));
    }
}

void save_model(const LinearModel &model, const std::filesystem::path &path) {
    std::ofstream out(path);
    if (!out) {
        throw Error(fmt::format("cannot write model '{}'", path.string()));
    }
    out << model_to_json(model).dump(2) << '\n';
}

LinearModel load_model(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(fmt::format("cannot read model '{}'", path.string()));
    }
    const auto json = nlohmann::json::parse(in, nullptr, false);
    if (json.is_discarded()) {
        throw ValidationError(fmt::format("model '{}' is not valid JSON", path.string()));
    }
    return model_from_json(json);
}

}  // namespace misinfo
