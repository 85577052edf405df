#ifndef MISINFO_ENGAGEMENT_FEATURES_HPP
#define MISINFO_ENGAGEMENT_FEATURES_HPP

#include "misinfo/corpus.hpp"
#include "misinfo/feature_block.hpp"

#include <cstddef>
#include <cstdint>

namespace misinfo {

inline constexpr std::size_t kEngagementDim = 6;

struct EngagementOptions {
    /// Replace the ordinal category slot with one indicator per registry code
    /// (dim becomes 5 + 32).
    bool one_hot_category{false};
};

/// Whole calendar days between the dates, at least 1.
[[nodiscard]] std::int64_t days_between(Date publish_date, Date query_date);

/// view_count / max(1, days). Throws ValidationError if query precedes publish.
[[nodiscard]] double views_per_day(std::uint64_t view_count, Date publish_date, Date query_date);

[[nodiscard]] std::size_t engagement_dim(const EngagementOptions &options);
[[nodiscard]] const FeatureNames &engagement_feature_names(const EngagementOptions &options = {});

/// [views_per_day, comment_count, thumbs_up, thumbs_down, duration_s,
/// category_id]; comments disabled maps to 0.
[[nodiscard]] FeatureBlock engagement_block(const EngagementMeta &meta, const EngagementOptions &options = {});

}  // namespace misinfo

#endif  // MISINFO_ENGAGEMENT_FEATURES_HPP
