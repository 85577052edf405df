#ifndef MISINFO_FEATURE_MATRIX_HPP
#define MISINFO_FEATURE_MATRIX_HPP

#include "misinfo/feature_block.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace misinfo {

struct SparseRow {
    std::span<const std::uint32_t> indices;
    std::span<const double> values;

    [[nodiscard]] double dot(std::span<const double> dense) const;
    [[nodiscard]] double squared_norm() const;
};

struct BlockSpan {
    BlockKind kind{BlockKind::Engagement};
    std::size_t begin{0};
    std::size_t end{0};

    [[nodiscard]] std::size_t size() const { return end - begin; }
    friend bool operator==(const BlockSpan &, const BlockSpan &) = default;
};

/// Fused design matrix in compressed-row form. Sparse blocks keep only their
/// nonzeros; dense blocks contribute a contiguous run per row.
class FeatureMatrix {
  public:
    FeatureMatrix() = default;
    FeatureMatrix(std::vector<std::string> feature_names, std::vector<BlockSpan> block_spans);

    [[nodiscard]] std::size_t n_rows() const { return row_ids_.size(); }
    [[nodiscard]] std::size_t n_cols() const { return feature_names_.size(); }
    [[nodiscard]] const std::vector<std::string> &feature_names() const { return feature_names_; }
    [[nodiscard]] const std::vector<BlockSpan> &block_spans() const { return block_spans_; }
    [[nodiscard]] const std::vector<std::string> &row_ids() const { return row_ids_; }
    [[nodiscard]] SparseRow row(std::size_t i) const;
    [[nodiscard]] std::vector<double> dense_row(std::size_t i) const;

    /// Appends a row; indices must be strictly increasing and < n_cols.
    void append_row(std::string id, std::span<const std::uint32_t> indices, std::span<const double> values);

    /// Multiplies column j of every row by scale[j].
    void scale_columns(std::span<const double> scale);

  private:
    std::vector<std::string> feature_names_;
    std::vector<BlockSpan> block_spans_;
    std::vector<std::string> row_ids_;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<std::uint32_t> col_idx_;
    std::vector<double> values_;
};

/// Unit Euclidean norm; a zero vector comes back unchanged with a warning.
[[nodiscard]] FeatureBlock l2_normalize_block(const FeatureBlock &block);

struct RowBlocks {
    std::string id;
    std::vector<FeatureBlock> blocks;  // same kinds and dims for every row
};

/// Normalizes every block of every row independently and concatenates them
/// in the order given. Feature names are prefixed "block:". Normalization
/// warnings are appended to `warnings` as "id: message".
[[nodiscard]] FeatureMatrix assemble_rows(const std::vector<RowBlocks> &rows, std::vector<std::string> *warnings = nullptr);

/// Per-column L2 scales computed on a training matrix (zero columns keep 1).
[[nodiscard]] std::vector<double> column_l2_scales(const FeatureMatrix &matrix);

}  // namespace misinfo

#endif  // MISINFO_FEATURE_MATRIX_HPP
