#ifndef MISINFO_FEATURE_BLOCK_HPP
#define MISINFO_FEATURE_BLOCK_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace misinfo {

/// Feature families, declared in canonical fusion order.
enum class BlockKind { Engagement, Lexicon, Ngrams, LexRich, Syntax, Readability, Acoustic };

inline constexpr std::array<BlockKind, 7> kCanonicalBlockOrder{
    BlockKind::Engagement, BlockKind::Lexicon,     BlockKind::Ngrams,  BlockKind::LexRich,
    BlockKind::Syntax,     BlockKind::Readability, BlockKind::Acoustic};

[[nodiscard]] std::string_view block_name(BlockKind kind);

/// Accepts the canonical names plus "liwc" for the lexicon block.
[[nodiscard]] std::optional<BlockKind> parse_block_name(std::string_view name);

/// Comma-separated list of the canonical names, for error messages.
[[nodiscard]] std::string valid_block_names();

/// Blocks whose layout depends on a vocabulary fitted on training data.
[[nodiscard]] constexpr bool is_vocab_block(BlockKind kind) {
    return kind == BlockKind::Ngrams || kind == BlockKind::Syntax;
}

struct SparseVector {
    std::vector<std::uint32_t> indices;  // strictly increasing
    std::vector<double> values;

    friend bool operator==(const SparseVector &, const SparseVector &) = default;
};

using FeatureNames = std::shared_ptr<const std::vector<std::string>>;

struct FeatureBlock {
    BlockKind kind{BlockKind::Engagement};
    std::size_t dim{0};
    FeatureNames feature_names;
    std::variant<std::vector<double>, SparseVector> values;
    std::vector<std::string> warnings;

    [[nodiscard]] bool is_sparse() const { return std::holds_alternative<SparseVector>(values); }
    [[nodiscard]] double l2_norm() const;
    [[nodiscard]] std::vector<double> to_dense() const;
    [[nodiscard]] double at(std::size_t index) const;

    /// Throws ValidationError when dim, names and values disagree.
    void validate() const;
};

[[nodiscard]] FeatureBlock make_dense_block(BlockKind kind, FeatureNames names, std::vector<double> values);
[[nodiscard]] FeatureBlock make_sparse_block(BlockKind kind, FeatureNames names, SparseVector values);

}  // namespace misinfo

#endif  // MISINFO_FEATURE_BLOCK_HPP
