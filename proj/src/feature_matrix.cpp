#include "misinfo/feature_matrix.hpp"

#include "misinfo/error.hpp"

#include <fmt/format.h>

#include <cmath>

namespace misinfo {

double SparseRow::dot(std::span<const double> dense) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < indices.size(); ++k) {
        sum += values[k] * dense[indices[k]];
    }
    return sum;
}

double SparseRow::squared_norm() const {
    double sum = 0.0;
    for (const double v : values) {
        sum += v * v;
    }
    return sum;
}

FeatureMatrix::FeatureMatrix(std::vector<std::string> feature_names, std::vector<BlockSpan> block_spans)
    : feature_names_(std::move(feature_names)), block_spans_(std::move(block_spans)) {
    std::size_t expected = 0;
    for (const auto &span : block_spans_) {
        if (span.begin != expected || span.end < span.begin) {
            throw ValidationError("block spans must partition the column range in order");
        }
        expected = span.end;
    }
    if (!block_spans_.empty() && expected != feature_names_.size()) {
        throw ValidationError("block spans do not cover every feature name");
    }
}

SparseRow FeatureMatrix::row(std::size_t i) const {
    const auto begin = row_ptr_.at(i);
    const auto end = row_ptr_.at(i + 1);
    return {std::span(col_idx_).subspan(begin, end - begin), std::span(values_).subspan(begin, end - begin)};
}

std::vector<double> FeatureMatrix::dense_row(std::size_t i) const {
    std::vector<double> dense(n_cols(), 0.0);
    const auto r = row(i);
    for (std::size_t k = 0; k < r.indices.size(); ++k) {
        dense[r.indices[k]] = r.values[k];
    }
    return dense;
}

void FeatureMatrix::append_row(std::string id, std::span<const std::uint32_t> indices, std::span<const double> values) {
    if (indices.size() != values.size()) {
        throw ValidationError("append_row: indices and values differ in length");
    }
    for (std::size_t k = 0; k < indices.size(); ++k) {
        if (indices[k] >= n_cols() || (k > 0 && indices[k] <= indices[k - 1])) {
            throw ValidationError(fmt::format("append_row '{}': column indices must increase and stay below {}", id,
                                              n_cols()));
        }
    }
    row_ids_.push_back(std::move(id));
    col_idx_.insert(col_idx_.end(), indices.begin(), indices.end());
    values_.insert(values_.end(), values.begin(), values.end());
    row_ptr_.push_back(col_idx_.size());
}

void FeatureMatrix::scale_columns(std::span<const double> scale) {
    if (scale.size() != n_cols()) {
        throw ValidationError("scale_columns: one scale per column required");
    }
    for (std::size_t k = 0; k < col_idx_.size(); ++k) {
        values_[k] *= scale[col_idx_[k]];
    }
}

FeatureBlock l2_normalize_block(const FeatureBlock &block) {
    FeatureBlock out = block;
    const double norm = block.l2_norm();
    if (norm == 0.0) {
        out.warnings.push_back(fmt::format("{} block is all zeros, left unnormalized", block_name(block.kind)));
        return out;
    }
    auto &vals = out.is_sparse() ? std::get<SparseVector>(out.values).values : std::get<std::vector<double>>(out.values);
    for (auto &v : vals) {
        v /= norm;
    }
    return out;
}

FeatureMatrix assemble_rows(const std::vector<RowBlocks> &rows, std::vector<std::string> *warnings) {
    if (rows.empty()) {
        throw ValidationError("assemble_rows: no rows");
    }
    const auto &layout = rows.front().blocks;
    if (layout.empty()) {
        throw ValidationError("assemble_rows: no blocks enabled");
    }
    std::vector<std::string> names;
    std::vector<BlockSpan> spans;
    for (const auto &block : layout) {
        const auto begin = names.size();
        for (const auto &name : *block.feature_names) {
            names.push_back(fmt::format("{}:{}", block_name(block.kind), name));
        }
        spans.push_back({block.kind, begin, names.size()});
    }
    FeatureMatrix matrix(std::move(names), std::move(spans));

    std::vector<std::uint32_t> indices;
    std::vector<double> values;
    for (const auto &row : rows) {
        if (row.blocks.size() != layout.size()) {
            throw ValidationError(fmt::format("assemble_rows: record '{}' has {} blocks, expected {}", row.id,
                                              row.blocks.size(), layout.size()));
        }
        indices.clear();
        values.clear();
        for (std::size_t b = 0; b < row.blocks.size(); ++b) {
            const auto &block = row.blocks[b];
            if (block.kind != layout[b].kind || block.dim != layout[b].dim) {
                throw ValidationError(fmt::format("assemble_rows: record '{}' block {} does not match the layout", row.id,
                                                  block_name(block.kind)));
            }
            const auto normalized = l2_normalize_block(block);
            if (warnings != nullptr) {
                for (const auto &w : normalized.warnings) {
                    warnings->push_back(fmt::format("{}: {}", row.id, w));
                }
            }
            const auto offset = static_cast<std::uint32_t>(matrix.block_spans()[b].begin);
            if (normalized.is_sparse()) {
                const auto &sparse = std::get<SparseVector>(normalized.values);
                for (std::size_t k = 0; k < sparse.indices.size(); ++k) {
                    indices.push_back(offset + sparse.indices[k]);
                    values.push_back(sparse.values[k]);
                }
            } else {
                const auto &dense = std::get<std::vector<double>>(normalized.values);
                for (std::size_t k = 0; k < dense.size(); ++k) {
                    indices.push_back(offset + static_cast<std::uint32_t>(k));
                    values.push_back(dense[k]);
                }
            }
        }
        matrix.append_row(row.id, indices, values);
    }
    return matrix;
}

std::vector<double> column_l2_scales(const FeatureMatrix &matrix) {
    std::vector<double> sums(matrix.n_cols(), 0.0);
    for (std::size_t i = 0; i < matrix.n_rows(); ++i) {
        const auto r = matrix.row(i);
        for (std::size_t k = 0; k < r.indices.size(); ++k) {
            sums[r.indices[k]] += r.values[k] * r.values[k];
        }
    }
    std::vector<double> scales(matrix.n_cols(), 1.0);
    for (std::size_t j = 0; j < sums.size(); ++j) {
        if (sums[j] > 0.0) {
            scales[j] = 1.0 / std::sqrt(sums[j]);
        }
    }
    return scales;
}

}  // namespace misinfo
