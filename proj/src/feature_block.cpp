#include "misinfo/feature_block.hpp"

#include "misinfo/error.hpp"

#include <fmt/format.h>

#include <cmath>

namespace misinfo {

std::string_view block_name(BlockKind kind) {
    switch (kind) {
    case BlockKind::Engagement: return "engagement";
    case BlockKind::Lexicon: return "lexicon";
    case BlockKind::Ngrams: return "ngrams";
    case BlockKind::LexRich: return "lexrich";
    case BlockKind::Syntax: return "syntax";
    case BlockKind::Readability: return "readability";
    case BlockKind::Acoustic: return "acoustic";
    }
    return "unknown";
}

std::optional<BlockKind> parse_block_name(std::string_view name) {
    if (name == "liwc") {
        return BlockKind::Lexicon;
    }
    for (const auto kind : kCanonicalBlockOrder) {
        if (block_name(kind) == name) {
            return kind;
        }
    }
    return std::nullopt;
}

std::string valid_block_names() {
    std::string out;
    for (const auto kind : kCanonicalBlockOrder) {
        if (!out.empty()) {
            out += ", ";
        }
        out += block_name(kind);
    }
    return out;
}

double FeatureBlock::l2_norm() const {
    double sum = 0.0;
    const auto &vals = is_sparse() ? std::get<SparseVector>(values).values : std::get<std::vector<double>>(values);
    for (const double v : vals) {
        sum += v * v;
    }
    return std::sqrt(sum);
}

std::vector<double> FeatureBlock::to_dense() const {
    if (!is_sparse()) {
        return std::get<std::vector<double>>(values);
    }
    std::vector<double> dense(dim, 0.0);
    const auto &sparse = std::get<SparseVector>(values);
    for (std::size_t k = 0; k < sparse.indices.size(); ++k) {
        dense[sparse.indices[k]] = sparse.values[k];
    }
    return dense;
}

double FeatureBlock::at(std::size_t index) const {
    if (index >= dim) {
        throw ValidationError(fmt::format("{} block: index {} out of range {}", block_name(kind), index, dim));
    }
    if (!is_sparse()) {
        return std::get<std::vector<double>>(values)[index];
    }
    const auto &sparse = std::get<SparseVector>(values);
    for (std::size_t k = 0; k < sparse.indices.size(); ++k) {
        if (sparse.indices[k] == index) {
            return sparse.values[k];
        }
    }
    return 0.0;
}

void FeatureBlock::validate() const {
    const auto name = block_name(kind);
    if (!feature_names || feature_names->size() != dim) {
        throw ValidationError(fmt::format("{} block: {} feature names for dim {}", name,
                                          feature_names ? feature_names->size() : 0, dim));
    }
    if (is_sparse()) {
        const auto &sparse = std::get<SparseVector>(values);
        if (sparse.indices.size() != sparse.values.size() || sparse.values.size() > dim) {
            throw ValidationError(fmt::format("{} block: inconsistent sparse storage", name));
        }
        for (std::size_t k = 0; k < sparse.indices.size(); ++k) {
            if (sparse.indices[k] >= dim || (k > 0 && sparse.indices[k] <= sparse.indices[k - 1])) {
                throw ValidationError(fmt::format("{} block: sparse indices must be increasing and < {}", name, dim));
            }
        }
    } else if (std::get<std::vector<double>>(values).size() != dim) {
        throw ValidationError(fmt::format("{} block: {} values for dim {}", name,
                                          std::get<std::vector<double>>(values).size(), dim));
    }
}

FeatureBlock make_dense_block(BlockKind kind, FeatureNames names, std::vector<double> values) {
    FeatureBlock block;
    block.kind = kind;
    block.dim = names ? names->size() : 0;
    block.feature_names = std::move(names);
    block.values = std::move(values);
    block.validate();
    return block;
}

FeatureBlock make_sparse_block(BlockKind kind, FeatureNames names, SparseVector values) {
    FeatureBlock block;
    block.kind = kind;
    block.dim = names ? names->size() : 0;
    block.feature_names = std::move(names);
    block.values = std::move(values);
    block.validate();
    return block;
}

}  // namespace misinfo
