#include "misinfo/error.hpp"
#include "misinfo/evaluation.hpp"
#include "misinfo/pipeline.hpp"
#include "support/test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace misinfo;

namespace {

std::vector<BlockKind> only(BlockKind kind) { return {kind}; }

PreparedCorpus planted(const testing::PlantedCorpusOptions &opts, std::span<const BlockKind> blocks) {
    return prepare_corpus(testing::planted_records(opts), blocks, ExtractionResources{});
}

FoldPlan plan_for(const PreparedCorpus &corpus, std::size_t k = 5, std::uint64_t seed = kDefaultSeed) {
    const auto ids = corpus.ids();
    const auto labels = corpus.labels();
    return stratified_kfold(ids, labels, k, seed);
}

std::array<std::size_t, 2> class_counts(const FoldPlan &plan, std::span<const Label> labels, std::size_t fold) {
    std::array<std::size_t, 2> out{};
    for (const auto i : plan.test_indices(fold)) {
        ++out[labels[i] == Label::Trustworthy ? 0 : 1];
    }
    return out;
}

}  // namespace

TEST_CASE("stratified folds on 5 + 5") {
    const auto labels = testing::label_counts(5, 5);
    const auto ids = testing::numbered_ids(10);
    const auto plan = stratified_kfold(ids, labels, 5, 1);
    for (std::size_t f = 0; f < 5; ++f) {
        CHECK(class_counts(plan, labels, f) == std::array<std::size_t, 2>{1, 1});
    }
}

TEST_CASE("stratified folds on 132 / 118") {
    const auto labels = testing::label_counts(132, 118);
    const auto ids = testing::numbered_ids(250);
    const auto plan = stratified_kfold(ids, labels, 5, kDefaultSeed);
    std::vector<std::size_t> seen(250, 0);
    for (std::size_t f = 0; f < 5; ++f) {
        const auto test = plan.test_indices(f);
        CHECK(test.size() == 50);
        CHECK(plan.train_indices(f).size() == 200);
        const auto counts = class_counts(plan, labels, f);
        CHECK((counts[0] == 26 || counts[0] == 27));
        CHECK((counts[1] == 23 || counts[1] == 24));
        for (const auto i : test) {
            ++seen[i];
        }
    }
    CHECK(std::all_of(seen.begin(), seen.end(), [](std::size_t s) { return s == 1; }));
    CHECK(plan == stratified_kfold(ids, labels, 5, kDefaultSeed));
    CHECK_FALSE(plan == stratified_kfold(ids, labels, 5, kDefaultSeed + 1));
}

TEST_CASE("stratification bound holds for arbitrary class sizes") {
    for (std::size_t n_t = 3; n_t < 40; n_t += 5) {
        for (std::size_t n_m = 3; n_m < 40; n_m += 7) {
            for (const std::size_t k : {2u, 3u}) {
                const auto labels = testing::label_counts(n_t, n_m);
                const auto ids = testing::numbered_ids(n_t + n_m);
                const auto plan = stratified_kfold(ids, labels, k, n_t * 100 + n_m);
                for (std::size_t f = 0; f < k; ++f) {
                    const auto counts = class_counts(plan, labels, f);
                    CHECK(std::abs(static_cast<double>(counts[0]) - static_cast<double>(n_t) / k) <= 1.0);
                    CHECK(std::abs(static_cast<double>(counts[1]) - static_cast<double>(n_m) / k) <= 1.0);
                }
            }
        }
    }
}

TEST_CASE("fold errors") {
    const auto labels = testing::label_counts(3, 10);
    const auto ids = testing::numbered_ids(13);
    CHECK_THROWS_AS((void)stratified_kfold(ids, labels, 5, 1), ValidationError);
    CHECK_THROWS_AS((void)stratified_kfold(ids, labels, 1, 1), ValidationError);
}

TEST_CASE("metrics") {
    const auto m = metrics(Confusion{3, 1, 1, 5});
    CHECK(m.misinformative.precision == doctest::Approx(0.75));
    CHECK(m.misinformative.recall == doctest::Approx(0.75));
    CHECK(m.misinformative.f1 == doctest::Approx(0.75));
    CHECK(m.accuracy == doctest::Approx(0.8));
    CHECK(m.flags.empty());

    const auto perfect = metrics(Confusion{4, 0, 0, 6});
    CHECK(perfect.accuracy == 1.0);
    CHECK(perfect.misinformative.f1 == 1.0);
    CHECK(perfect.trustworthy.f1 == 1.0);

    const auto all_trust = metrics(Confusion{0, 0, 118, 132});
    CHECK(all_trust.accuracy == doctest::Approx(0.528));
    CHECK(all_trust.misinformative.precision == 0.0);
    CHECK(all_trust.misinformative.recall == 0.0);
    CHECK(all_trust.misinformative.f1 == 0.0);
    CHECK(all_trust.trustworthy.recall == 1.0);
    CHECK(std::find(all_trust.flags.begin(), all_trust.flags.end(),
                    "misinformative.precision undefined, set to 0") != all_trust.flags.end());
    CHECK_THROWS_AS((void)metrics(Confusion{}), ValidationError);
}

TEST_CASE("majority baseline on 132 / 118") {
    const auto labels = testing::label_counts(132, 118);
    const auto ids = testing::numbered_ids(250);
    const auto report = majority_baseline(labels, stratified_kfold(ids, labels, 5, kDefaultSeed));
    CHECK(std::abs(report.macro.accuracy - 0.528) < 1e-4);
    CHECK(std::abs(report.pooled.accuracy - 0.528) < 1e-12);
    CHECK(report.macro.misinformative.precision == 0.0);
    CHECK(report.macro.misinformative.recall == 0.0);
    CHECK(report.macro.misinformative.f1 == 0.0);
    CHECK(report.macro.trustworthy.recall == 1.0);
}

TEST_CASE("macro accuracy equals pooled accuracy for equal fold sizes") {
    testing::PlantedCorpusOptions opts;
    opts.marked_sentences = 1;
    const auto blocks = only(BlockKind::Ngrams);
    const auto corpus = planted(opts, blocks);
    const auto report = evaluate_cv(corpus, blocks, plan_for(corpus), EvalOptions{});
    CHECK(report.macro.accuracy == doctest::Approx(report.pooled.accuracy).epsilon(1e-12));
}

TEST_CASE("planted signal is learned and permuted labels are not") {
    const auto blocks = only(BlockKind::Ngrams);
    testing::PlantedCorpusOptions opts;
    const auto corpus = planted(opts, blocks);
    const auto report = evaluate_cv(corpus, blocks, plan_for(corpus), EvalOptions{}, "ngrams");
    CHECK(report.macro.accuracy >= 0.90);
    CHECK(report.folds.size() == 5);
    for (const auto &fold : report.folds) {
        CHECK(fold.duality_gap <= 1e-3 * fold.primal_objective);
    }

    opts.permute_labels = true;
    const auto shuffled = planted(opts, blocks);
    const auto null_report = evaluate_cv(shuffled, blocks, plan_for(shuffled), EvalOptions{});
    CHECK(null_report.macro.accuracy >= 0.35);
    CHECK(null_report.macro.accuracy <= 0.65);
}

TEST_CASE("flat engagement carries no signal") {
    const auto blocks = only(BlockKind::Engagement);
    testing::PlantedCorpusOptions opts;
    opts.flat_engagement = true;
    const auto corpus = planted(opts, blocks);
    const auto plan = plan_for(corpus);
    const auto report = evaluate_cv(corpus, blocks, plan, EvalOptions{});
    const auto baseline = majority_baseline(corpus.labels(), plan);
    CHECK(report.macro.accuracy <= baseline.macro.accuracy + 0.1);
}

TEST_CASE("vocabularies never see the test split") {
    const auto blocks = only(BlockKind::Ngrams);
    testing::PlantedCorpusOptions opts;
    auto records = testing::planted_records(opts);
    const auto corpus = prepare_corpus(records, blocks, ExtractionResources{});
    const auto plan = plan_for(corpus);
    for (std::size_t fold = 0; fold < plan.k; ++fold) {
        const auto train = plan.train_indices(fold);
        const auto before = fit_fold_context(corpus, train, blocks);

        auto mutated = records;
        for (const auto i : plan.test_indices(fold)) {
            mutated[i].transcript = "Leak leak leak leak leak leak leak leak leak leak leak leak.";
        }
        const auto after = fit_fold_context(prepare_corpus(mutated, blocks, ExtractionResources{}), train, blocks);
        CHECK(*before.ngrams == *after.ngrams);

        auto train_mutated = records;
        train_mutated[train.front()].transcript = "Leak leak leak leak leak leak leak leak leak leak leak leak.";
        const auto sensitive =
            fit_fold_context(prepare_corpus(train_mutated, blocks, ExtractionResources{}), train, blocks);
        CHECK_FALSE(*before.ngrams == *sensitive.ngrams);
    }
}

TEST_CASE("ablation configs share one plan") {
    const auto defaults = default_ablation_configs();
    CHECK(defaults.size() == 10);
    CHECK(defaults.front().name == "engagement");

    const auto configs = parse_ablation_configs("words=ngrams;engagement");
    REQUIRE(configs.size() == 2);
    CHECK(configs[0].name == "words");
    CHECK(configs[1].name == "engagement");
    CHECK_THROWS_AS((void)parse_ablation_configs("x=bogus"), ValidationError);

    std::vector<BlockKind> blocks{BlockKind::Engagement, BlockKind::Ngrams};
    const auto corpus = planted(testing::PlantedCorpusOptions{}, blocks);
    const auto plan = plan_for(corpus);
    const auto reports = ablation_suite(corpus, configs, plan, EvalOptions{});
    REQUIRE(reports.size() == 2);
    const auto single = evaluate_cv(corpus, configs[0].blocks, plan, EvalOptions{}, "words");
    CHECK(reports[0].macro.accuracy == single.macro.accuracy);
    for (std::size_t f = 0; f < plan.k; ++f) {
        CHECK(reports[0].folds[f].confusion == single.folds[f].confusion);
        CHECK(reports[0].folds[f].n_test == reports[1].folds[f].n_test);
    }

    const std::vector<std::string> header{"seed=1"};
    const auto table = format_report_table(reports, header);
    CHECK(table.rfind("# seed=1\n", 0) == 0);
    CHECK(table == format_report_table(ablation_suite(corpus, configs, plan, EvalOptions{}), header));
}

TEST_CASE("fold errors carry the config and fold") {
    const auto blocks = only(BlockKind::Ngrams);
    const auto corpus = planted(testing::PlantedCorpusOptions{}, blocks);
    EvalOptions options;
    options.min_total_freq = 0;
    CHECK_THROWS_WITH((void)evaluate_cv(corpus, blocks, plan_for(corpus), options, "huge"),
                      doctest::Contains("config 'huge', fold"));
}
