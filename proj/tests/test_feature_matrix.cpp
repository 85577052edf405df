#include "misinfo/error.hpp"
#include "misinfo/feature_matrix.hpp"
#include "misinfo/linguistic_features.hpp"
#include "misinfo/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace misinfo;

namespace {

FeatureNames names(std::size_t n, const std::string &stem) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(stem + std::to_string(i));
    }
    return std::make_shared<const std::vector<std::string>>(std::move(out));
}

FeatureBlock dense(BlockKind kind, std::vector<double> values) {
    const auto n = values.size();
    return make_dense_block(kind, names(n, "f"), std::move(values));
}

std::vector<double> random_values(std::mt19937_64 &gen, std::size_t n) {
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::vector<double> out(n);
    for (auto &x : out) {
        x = u(gen);
    }
    return out;
}

}  // namespace

TEST_CASE("l2 normalization") {
    CHECK(l2_normalize_block(dense(BlockKind::Engagement, {3, 4})).to_dense() == std::vector<double>{0.6, 0.8});
    const auto unit = dense(BlockKind::Engagement, {0.6, 0.8});
    CHECK(l2_normalize_block(unit).to_dense() == unit.to_dense());
    const auto zero = l2_normalize_block(dense(BlockKind::Acoustic, {0, 0, 0}));
    CHECK(zero.to_dense() == std::vector<double>{0, 0, 0});
    CHECK_FALSE(zero.warnings.empty());

    const auto sparse = make_sparse_block(BlockKind::Ngrams, names(5, "t"), SparseVector{{1, 3}, {3.0, 4.0}});
    const auto normalized = l2_normalize_block(sparse);
    CHECK(normalized.is_sparse());
    CHECK(normalized.at(1) == doctest::Approx(0.6));
    CHECK(normalized.at(3) == doctest::Approx(0.8));
}

TEST_CASE("assembled row lengths follow the block layouts") {
    std::mt19937_64 gen(1);
    const RowBlocks engagement{"a", {dense(BlockKind::Engagement, random_values(gen, 6))}};
    CHECK(assemble_rows({engagement}).n_cols() == 6);

    const RowBlocks two{"a",
                        {make_dense_block(BlockKind::LexRich, lexrich_feature_names(), random_values(gen, kLexRichDim)),
                         make_dense_block(BlockKind::Readability, readability_feature_names(),
                                          random_values(gen, kReadabilityDim))}};
    const auto matrix = assemble_rows({two});
    CHECK(matrix.n_cols() == 68);
    REQUIRE(matrix.block_spans().size() == 2);
    CHECK(matrix.block_spans()[0].size() == 33);
    CHECK(matrix.feature_names()[0] == "lexrich:wordtypes");
    CHECK_THROWS_AS((void)assemble_rows({}), ValidationError);
}

TEST_CASE("rescaling one block of one record leaves the fused row unchanged") {
    std::mt19937_64 gen(2);
    for (int trial = 0; trial < 50; ++trial) {
        const auto engagement = random_values(gen, 6);
        auto acoustic = random_values(gen, 384);
        const RowBlocks original{"r", {dense(BlockKind::Engagement, engagement), dense(BlockKind::Acoustic, acoustic)}};
        std::uniform_real_distribution<double> scale_dist(0.01, 100.0);
        const double scale = scale_dist(gen);
        for (auto &v : acoustic) {
            v *= scale;
        }
        const RowBlocks scaled{"r", {dense(BlockKind::Engagement, engagement), dense(BlockKind::Acoustic, acoustic)}};
        const auto a = assemble_rows({original}).dense_row(0);
        const auto b = assemble_rows({scaled}).dense_row(0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(std::abs(a[i] - b[i]) < 1e-12);
        }
    }
}

TEST_CASE("each nonzero block has unit norm after assembly") {
    std::mt19937_64 gen(3);
    std::vector<RowBlocks> rows;
    for (int r = 0; r < 5; ++r) {
        rows.push_back({"r" + std::to_string(r),
                        {dense(BlockKind::Engagement, random_values(gen, 6)),
                         dense(BlockKind::Readability, random_values(gen, 35))}});
    }
    rows.push_back({"zero", {dense(BlockKind::Engagement, std::vector<double>(6, 0.0)),
                             dense(BlockKind::Readability, random_values(gen, 35))}});
    std::vector<std::string> warnings;
    const auto m = assemble_rows(rows, &warnings);
    CHECK(m.n_rows() == 6);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].rfind("zero: ", 0) == 0);
    for (std::size_t r = 0; r + 1 < m.n_rows(); ++r) {
        const auto row = m.dense_row(r);
        for (const auto &span : m.block_spans()) {
            double sq = 0.0;
            for (auto i = span.begin; i < span.end; ++i) {
                sq += row[i] * row[i];
            }
            CHECK(std::sqrt(sq) == doctest::Approx(1.0));
        }
    }
}

TEST_CASE("append_row validates indices") {
    FeatureMatrix m({"a", "b", "c"}, {BlockSpan{BlockKind::Engagement, 0, 3}});
    const std::vector<std::uint32_t> good{0, 2};
    const std::vector<double> values{1.0, 2.0};
    m.append_row("x", good, values);
    CHECK(m.row(0).dot(std::vector<double>{1, 1, 1}) == 3.0);
    CHECK(m.row(0).squared_norm() == 5.0);
    const std::vector<std::uint32_t> unsorted{2, 0};
    CHECK_THROWS_AS(m.append_row("y", unsorted, values), ValidationError);
    const std::vector<std::uint32_t> out_of_range{0, 3};
    CHECK_THROWS_AS(m.append_row("y", out_of_range, values), ValidationError);
    CHECK_THROWS_AS(FeatureMatrix({"a", "b"}, {BlockSpan{BlockKind::Engagement, 0, 1}}), ValidationError);
}

TEST_CASE("column scales") {
    FeatureMatrix m({"a", "b", "c"}, {BlockSpan{BlockKind::Engagement, 0, 3}});
    const std::vector<std::uint32_t> idx{0, 1};
    m.append_row("x", idx, std::vector<double>{3.0, 1.0});
    m.append_row("y", idx, std::vector<double>{4.0, 0.0});
    const auto scales = column_l2_scales(m);
    CHECK(scales[0] == doctest::Approx(1.0 / 5.0));
    CHECK(scales[1] == doctest::Approx(1.0));
    CHECK(scales[2] == 1.0);
    m.scale_columns(scales);
    CHECK(m.dense_row(0)[0] == doctest::Approx(0.6));
}
