#include "misinfo/evaluation.hpp"

#include "misinfo/error.hpp"
#include "misinfo/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <numeric>
#include <set>

namespace misinfo {

std::vector<std::size_t> FoldPlan::test_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        if (assignments[i] == fold) {
            out.push_back(i);
        }
    }
    return out;
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        if (assignments[i] != fold) {
            out.push_back(i);
        }
    }
    return out;
}

FoldPlan stratified_kfold(std::span<const std::string> ids, std::span<const Label> labels, std::size_t k,
                          std::uint64_t seed) {
    if (ids.size() != labels.size()) {
        throw ValidationError("stratified_kfold: ids and labels differ in length");
    }
    if (k < 2) {
        throw ValidationError(fmt::format("stratified_kfold: k must be at least 2, got {}", k));
    }
    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.ids.assign(ids.begin(), ids.end());
    plan.assignments.assign(ids.size(), 0);

    Rng rng(seed);
    std::size_t position = 0;
    for (const auto cls : {Label::Trustworthy, Label::Misinformative}) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == cls) {
                members.push_back(i);
            }
        }
        if (members.size() < k) {
            throw ValidationError(fmt::format("stratified_kfold: class {} has {} member(s), fewer than k = {}",
                                              to_string(cls), members.size(), k));
        }
        shuffle_in_place(std::span(members), rng);
        for (const auto i : members) {
            plan.assignments[i] = position++ % k;
        }
    }
    return plan;
}

void Confusion::add(Label truth, Label predicted) {
    if (truth == Label::Misinformative) {
        (predicted == Label::Misinformative ? tp : fn) += 1;
    } else {
        (predicted == Label::Misinformative ? fp : tn) += 1;
    }
}

Confusion &Confusion::operator+=(const Confusion &other) {
    tp += other.tp;
    fp += other.fp;
    fn += other.fn;
    tn += other.tn;
    return *this;
}

namespace {

ClassMetrics class_metrics(std::size_t hit, std::size_t false_alarm, std::size_t miss, std::string_view name,
                           std::vector<std::string> &flags) {
    ClassMetrics m;
    if (hit + false_alarm == 0) {
        flags.push_back(fmt::format("{}.precision undefined, set to 0", name));
    } else {
        m.precision = static_cast<double>(hit) / static_cast<double>(hit + false_alarm);
    }
    if (hit + miss == 0) {
        flags.push_back(fmt::format("{}.recall undefined, set to 0", name));
    } else {
        m.recall = static_cast<double>(hit) / static_cast<double>(hit + miss);
    }
    if (m.precision + m.recall > 0.0) {
        m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    }
    return m;
}

Metrics mean_metrics(const std::vector<FoldResult> &folds) {
    Metrics mean;
    std::set<std::string> flags;
    for (const auto &f : folds) {
        mean.accuracy += f.metrics.accuracy;
        mean.misinformative.precision += f.metrics.misinformative.precision;
        mean.misinformative.recall += f.metrics.misinformative.recall;
        mean.misinformative.f1 += f.metrics.misinformative.f1;
        mean.trustworthy.precision += f.metrics.trustworthy.precision;
        mean.trustworthy.recall += f.metrics.trustworthy.recall;
        mean.trustworthy.f1 += f.metrics.trustworthy.f1;
        flags.insert(f.metrics.flags.begin(), f.metrics.flags.end());
    }
    const auto n = static_cast<double>(folds.size());
    mean.accuracy /= n;
    for (auto *c : {&mean.misinformative, &mean.trustworthy}) {
        c->precision /= n;
        c->recall /= n;
        c->f1 /= n;
    }
    mean.flags.assign(flags.begin(), flags.end());
    return mean;
}

void finalize(EvalReport &report) {
    Confusion pooled;
    double features = 0.0;
    for (const auto &f : report.folds) {
        pooled += f.confusion;
        features += static_cast<double>(f.n_features);
    }
    report.macro = mean_metrics(report.folds);
    report.pooled = metrics(pooled);
    report.mean_n_features = features / static_cast<double>(report.folds.size());
}

}  // namespace

Metrics metrics(const Confusion &c) {
    if (c.total() == 0) {
        throw ValidationError("metrics: empty confusion");
    }
    Metrics m;
    m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
    m.misinformative = class_metrics(c.tp, c.fp, c.fn, "misinformative", m.flags);
    m.trustworthy = class_metrics(c.tn, c.fn, c.fp, "trustworthy", m.flags);
    return m;
}

EvalReport evaluate_cv(const PreparedCorpus &corpus, std::span<const BlockKind> blocks, const FoldPlan &plan,
                       const EvalOptions &options, std::string name) {
    const auto ordered = canonical_blocks(blocks);
    if (plan.ids != corpus.ids()) {
        throw ValidationError("evaluate_cv: fold plan was built for a different corpus");
    }
    EvalReport report;
    report.name = name.empty() ? format_block_list(ordered) : std::move(name);
    report.blocks = ordered;
    report.skipped = corpus.skip_report(ordered);
    report.folds.resize(plan.k);

    parallel_for(plan.k, options.jobs, [&](std::size_t fold) {
        try {
            const auto train = corpus.usable(plan.train_indices(fold), ordered);
            const auto test = corpus.usable(plan.test_indices(fold), ordered);
            if (test.empty()) {
                throw ValidationError("test split has no usable record");
            }
            const auto context = fit_fold_context(corpus, train, ordered, options.min_total_freq);
            auto x_train = assemble(corpus, train, ordered, context);
            auto x_test = assemble(corpus, test, ordered, context);
            if (options.per_column_norm) {
                const auto scales = column_l2_scales(x_train);
                x_train.scale_columns(scales);
                x_test.scale_columns(scales);
            }
            std::vector<Label> y_train;
            y_train.reserve(train.size());
            for (const auto i : train) {
                y_train.push_back(corpus.records[i].label);
            }
            const auto model = train_linear_svm(x_train, y_train, options.svm);

            FoldResult result;
            result.fold = fold;
            result.n_train = train.size();
            result.n_test = test.size();
            result.n_features = x_train.n_cols();
            for (std::size_t r = 0; r < test.size(); ++r) {
                result.confusion.add(corpus.records[test[r]].label, predict(model, x_test.row(r)).label);
            }
            result.metrics = metrics(result.confusion);
            result.epochs_run = model.diagnostics.epochs_run;
            result.primal_objective = model.diagnostics.primal_objective;
            result.duality_gap = model.diagnostics.duality_gap;
            report.folds[fold] = std::move(result);
        } catch (const Error &e) {
            throw Error(fmt::format("config '{}', fold {}: {}", report.name, fold + 1, e.what()));
        }
    });
    finalize(report);
    return report;
}

EvalReport majority_baseline(std::span<const Label> labels, const FoldPlan &plan) {
    if (labels.size() != plan.assignments.size()) {
        throw ValidationError("majority_baseline: labels do not match the fold plan");
    }
    EvalReport report;
    report.name = "majority_baseline";
    for (std::size_t fold = 0; fold < plan.k; ++fold) {
        const auto train = plan.train_indices(fold);
        const auto positives = static_cast<std::size_t>(
            std::count_if(train.begin(), train.end(), [&](std::size_t i) { return labels[i] == Label::Misinformative; }));
        const auto majority = 2 * positives > train.size() ? Label::Misinformative : Label::Trustworthy;
        FoldResult result;
        result.fold = fold;
        result.n_train = train.size();
        for (const auto i : plan.test_indices(fold)) {
            result.confusion.add(labels[i], majority);
            ++result.n_test;
        }
        result.metrics = metrics(result.confusion);
        report.folds.push_back(std::move(result));
    }
    finalize(report);
    return report;
}

std::vector<AblationConfig> default_ablation_configs() {
    using enum BlockKind;
    return {
        {"engagement", {Engagement}},
        {"lexicon", {Lexicon}},
        {"ngrams", {Ngrams}},
        {"lexrich", {LexRich}},
        {"syntax", {Syntax}},
        {"readability", {Readability}},
        {"all_linguistic", {Lexicon, Ngrams, LexRich, Syntax, Readability}},
        {"acoustic", {Acoustic}},
        {"engagement+ngrams+acoustic", {Engagement, Ngrams, Acoustic}},
        {"engagement+linguistic+acoustic", {Engagement, Lexicon, Ngrams, LexRich, Syntax, Readability, Acoustic}},
    };
}

std::vector<AblationConfig> parse_ablation_configs(std::string_view text) {
    std::vector<AblationConfig> configs;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = std::min(text.find(';', start), text.size());
        const auto item = text.substr(start, end - start);
        if (!item.empty()) {
            const auto eq = item.find('=');
            AblationConfig config;
            config.blocks = parse_block_list(eq == std::string_view::npos ? item : item.substr(eq + 1));
            config.name = eq == std::string_view::npos ? format_block_list(config.blocks) : std::string(item.substr(0, eq));
            configs.push_back(std::move(config));
        }
        start = end + 1;
    }
    if (configs.empty()) {
        throw ValidationError("no ablation config given");
    }
    return configs;
}

std::vector<EvalReport> ablation_suite(const PreparedCorpus &corpus, std::span<const AblationConfig> configs,
                                       const FoldPlan &plan, const EvalOptions &options) {
    std::vector<EvalReport> reports;
    reports.reserve(configs.size());
    for (const auto &config : configs) {
        reports.push_back(evaluate_cv(corpus, config.blocks, plan, options, config.name));
    }
    return reports;
}

std::string format_report_table(std::span<const EvalReport> reports, std::span<const std::string> header_lines,
                                Aggregation aggregation) {
    std::string out;
    for (const auto &line : header_lines) {
        out += fmt::format("# {}\n", line);
    }
    out += "config\tblocks\tn_features\taccuracy\tmis_precision\tmis_recall\tmis_f1\ttrust_precision\ttrust_recall\t"
           "trust_f1\n";
    const auto pct = [](double v) { return fmt::format("{:.2f}", 100.0 * v); };
    for (const auto &r : reports) {
        const auto &m = aggregation == Aggregation::Macro ? r.macro : r.pooled;
        out += fmt::format("{}\t{}\t{:.1f}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n", r.name,
                           r.blocks.empty() ? "-" : format_block_list(r.blocks), r.mean_n_features, pct(m.accuracy),
                           pct(m.misinformative.precision), pct(m.misinformative.recall), pct(m.misinformative.f1),
                           pct(m.trustworthy.precision), pct(m.trustworthy.recall), pct(m.trustworthy.f1));
    }
    return out;
}

namespace {

nlohmann::json metrics_to_json(const Metrics &m) {
    const auto cls = [](const ClassMetrics &c) {
        return nlohmann::json{{"precision", c.precision}, {"recall", c.recall}, {"f1", c.f1}};
    };
    return {{"accuracy", m.accuracy},
            {"misinformative", cls(m.misinformative)},
            {"trustworthy", cls(m.trustworthy)},
            {"flags", m.flags}};
}

Metrics metrics_from_json(const nlohmann::json &j) {
    const auto cls = [](const nlohmann::json &c) {
        return ClassMetrics{c.at("precision").get<double>(), c.at("recall").get<double>(), c.at("f1").get<double>()};
    };
    Metrics m;
    m.accuracy = j.at("accuracy").get<double>();
    m.misinformative = cls(j.at("misinformative"));
    m.trustworthy = cls(j.at("trustworthy"));
    m.flags = j.at("flags").get<std::vector<std::string>>();
    return m;
}

}  // namespace

nlohmann::json report_to_json(const EvalReport &report) {
    nlohmann::json folds = nlohmann::json::array();
    for (const auto &f : report.folds) {
        folds.push_back({{"fold", f.fold},
                         {"n_train", f.n_train},
                         {"n_test", f.n_test},
                         {"n_features", f.n_features},
                         {"confusion", {{"tp", f.confusion.tp}, {"fp", f.confusion.fp}, {"fn", f.confusion.fn},
                                        {"tn", f.confusion.tn}}},
                         {"metrics", metrics_to_json(f.metrics)},
                         {"epochs_run", f.epochs_run},
                         {"primal_objective", f.primal_objective},
                         {"duality_gap", f.duality_gap}});
    }
    nlohmann::json skipped = nlohmann::json::array();
    for (const auto &s : report.skipped) {
        skipped.push_back({{"id", s.id}, {"block", block_name(s.block)}, {"reason", s.reason}});
    }
    return {{"config", report.name},
            {"blocks", format_block_list(report.blocks)},
            {"mean_n_features", report.mean_n_features},
            {"aggregation", "macro mean over folds; pooled metrics from summed confusions"},
            {"macro", metrics_to_json(report.macro)},
            {"pooled", metrics_to_json(report.pooled)},
            {"folds", folds},
            {"skipped", skipped}};
}

EvalReport report_from_json(const nlohmann::json &json) {
    try {
        EvalReport r;
        r.name = json.at("config").get<std::string>();
        const auto blocks = json.at("blocks").get<std::string>();
        if (!blocks.empty()) {
            r.blocks = parse_block_list(blocks);
        }
        r.mean_n_features = json.at("mean_n_features").get<double>();
        r.macro = metrics_from_json(json.at("macro"));
        r.pooled = metrics_from_json(json.at("pooled"));
        for (const auto &f : json.at("folds")) {
            FoldResult fold;
            fold.fold = f.at("fold").get<std::size_t>();
            fold.n_train = f.at("n_train").get<std::size_t>();
            fold.n_test = f.at("n_test").get<std::size_t>();
            fold.n_features = f.at("n_features").get<std::size_t>();
            const auto &c = f.at("confusion");
            fold.confusion = Confusion{c.at("tp").get<std::size_t>(), c.at("fp").get<std::size_t>(),
                                       c.at("fn").get<std::size_t>(), c.at("tn").get<std::size_t>()};
            fold.metrics = metrics_from_json(f.at("metrics"));
            fold.epochs_run = f.at("epochs_run").get<std::size_t>();
            fold.primal_objective = f.at("primal_objective").get<double>();
            fold.duality_gap = f.at("duality_gap").get<double>();
            r.folds.push_back(std::move(fold));
        }
        for (const auto &s : json.at("skipped")) {
            const auto kind = parse_block_name(s.at("block").get<std::string>());
            if (!kind) {
                throw ValidationError(fmt::format("unknown block '{}'", s.at("block").get<std::string>()));
            }
            r.skipped.push_back({s.at("id").get<std::string>(), *kind, s.at("reason").get<std::string>()});
        }
        return r;
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(fmt::format("malformed report: {}", e.what()));
    }
}

nlohmann::json plan_to_json(const FoldPlan &plan) {
    nlohmann::json assignments = nlohmann::json::object();
    for (std::size_t i = 0; i < plan.ids.size(); ++i) {
        assignments[plan.ids[i]] = plan.assignments[i];
    }
    return {{"k", plan.k}, {"seed", plan.seed}, {"assignments", assignments}};
}

}  // namespace misinfo
