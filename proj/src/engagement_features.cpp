#include "misinfo/engagement_features.hpp"

#include "misinfo/error.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace misinfo {

std::int64_t days_between(Date publish_date, Date query_date) {
    const auto days = (std::chrono::sys_days{query_date} - std::chrono::sys_days{publish_date}).count();
    if (days < 0) {
        throw ValidationError(fmt::format("query date {} precedes publish date {}", format_iso_date(query_date),
                                          format_iso_date(publish_date)));
    }
    return std::max<std::int64_t>(days, 1);
}

double views_per_day(std::uint64_t view_count, Date publish_date, Date query_date) {
    return static_cast<double>(view_count) / static_cast<double>(days_between(publish_date, query_date));
}

std::size_t engagement_dim(const EngagementOptions &options) {
    return options.one_hot_category ? kEngagementDim - 1 + kCategoryRegistry.size() : kEngagementDim;
}

const FeatureNames &engagement_feature_names(const EngagementOptions &options) {
    static const FeatureNames ordinal = std::make_shared<const std::vector<std::string>>(std::vector<std::string>{
        "views_per_day", "comment_count", "thumbs_up", "thumbs_down", "duration_s", "category_id"});
    static const FeatureNames one_hot = [] {
        std::vector<std::string> names(ordinal->begin(), ordinal->end() - 1);
        for (const int code : kCategoryRegistry) {
            names.push_back(fmt::format("category_{}", code));
        }
        return std::make_shared<const std::vector<std::string>>(std::move(names));
    }();
    return options.one_hot_category ? one_hot : ordinal;
}

FeatureBlock engagement_block(const EngagementMeta &meta, const EngagementOptions &options) {
    meta.validate();
    std::vector<double> values{views_per_day(meta.view_count, meta.publish_date, meta.query_date),
                               static_cast<double>(meta.comment_count.value_or(0)),
                               static_cast<double>(meta.thumbs_up), static_cast<double>(meta.thumbs_down),
                               meta.duration_s};
    if (options.one_hot_category) {
        for (const int code : kCategoryRegistry) {
            values.push_back(code == meta.category_id ? 1.0 : 0.0);
        }
    } else {
        values.push_back(static_cast<double>(meta.category_id));
    }
    return make_dense_block(BlockKind::Engagement, engagement_feature_names(options), std::move(values));
}

}  // namespace misinfo
