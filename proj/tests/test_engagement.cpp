#include "misinfo/engagement_features.hpp"
#include "misinfo/error.hpp"
#include "misinfo/metadata_client.hpp"
#include "support/test_support.hpp"

#include <doctest.h>

#include <fmt/format.h>

using namespace misinfo;

namespace {

Date day(int y, unsigned m, unsigned d) { return Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}}; }

EngagementMeta sample_meta() {
    EngagementMeta meta;
    meta.view_count = 1000;
    meta.publish_date = day(2018, 3, 1);
    meta.query_date = day(2018, 3, 11);
    meta.comment_count = 42;
    meta.thumbs_up = 17;
    meta.thumbs_down = 3;
    meta.duration_s = 297.0;
    meta.category_id = 27;
    return meta;
}

std::string video_json(std::string_view comments_field) {
    return fmt::format(R"({{"items":[{{"id":"abc","snippet":{{"publishedAt":"2018-03-01T12:00:00Z","categoryId":"27"}},)"
                       R"("statistics":{{"viewCount":"1000","likeCount":"17","dislikeCount":"3"{}}},)"
                       R"("contentDetails":{{"duration":"PT4M57S"}}}}]}})",
                       comments_field);
}

class FakeTransport : public HttpTransport {
  public:
    explicit FakeTransport(std::vector<HttpResponse> responses, int *calls)
        : responses_(std::move(responses)), calls_(calls) {}

    HttpResponse get(const std::string &, const std::string &) override {
        const auto i = static_cast<std::size_t>((*calls_)++);
        return responses_.at(std::min(i, responses_.size() - 1));
    }

  private:
    std::vector<HttpResponse> responses_;
    int *calls_;
};

MetadataClient client_with(const std::filesystem::path &cache, std::vector<HttpResponse> responses, int *calls,
                           bool offline = false) {
    MetadataClientOptions options;
    options.api_key = "k";
    options.cache_dir = cache;
    options.offline = offline;
    options.min_interval = std::chrono::milliseconds(0);
    return MetadataClient(options, std::make_unique<FakeTransport>(std::move(responses), calls));
}

}  // namespace

TEST_CASE("views per day") {
    CHECK(views_per_day(1000, day(2018, 3, 1), day(2018, 3, 11)) == 100.0);
    CHECK(views_per_day(1234, day(2018, 3, 1), day(2018, 3, 1)) == 1234.0);
    CHECK(days_between(day(2018, 12, 31), day(2019, 1, 1)) == 1);
    CHECK_THROWS_AS((void)views_per_day(1, day(2018, 3, 2), day(2018, 3, 1)), ValidationError);
    double previous = -1.0;
    for (std::uint64_t views = 0; views < 100000; views += 997) {
        const double v = views_per_day(views, day(2017, 1, 1), day(2018, 6, 9));
        CHECK(v >= previous);
        previous = v;
    }
}

TEST_CASE("aggregate views per day over 250 records") {
    // Record i: 40000 + 1000 i views, published 2018-01-01, queried 100 days later.
    double total_views = 0.0;
    double sum = 0.0;
    for (int i = 0; i < 250; ++i) {
        const auto views = static_cast<std::uint64_t>(40000 + 1000 * i);
        total_views += static_cast<double>(views);
        sum += views_per_day(views, day(2018, 1, 1), day(2018, 4, 11));
    }
    CHECK(total_views > 1e7);
    // mean of (40000 + 1000 i) / 100 over i < 250 = (40000 + 124500) / 100
    CHECK(sum / 250.0 == doctest::Approx(1645.0).epsilon(1e-12));
}

TEST_CASE("engagement block layout") {
    const auto meta = sample_meta();
    const auto block = engagement_block(meta);
    CHECK(block.dim == 6);
    CHECK(block.to_dense() == std::vector<double>{100.0, 42.0, 17.0, 3.0, 297.0, 27.0});

    auto disabled = meta;
    disabled.comment_count.reset();
    CHECK(engagement_block(disabled).at(1) == 0.0);

    EngagementOptions one_hot;
    one_hot.one_hot_category = true;
    const auto wide = engagement_block(meta, one_hot);
    CHECK(wide.dim == engagement_dim(one_hot));
    CHECK(wide.dim == 5 + 32);
    double ones = 0.0;
    for (std::size_t i = 5; i < wide.dim; ++i) {
        ones += wide.at(i);
    }
    CHECK(ones == 1.0);
}

TEST_CASE("iso durations") {
    CHECK(parse_iso_duration("PT4M57S") == 297.0);
    CHECK(parse_iso_duration("PT1H") == 3600.0);
    CHECK(parse_iso_duration("P1DT2S") == 86402.0);
    CHECK_THROWS_AS((void)parse_iso_duration("4M"), ValidationError);
    CHECK_THROWS_AS((void)parse_iso_duration("P1M"), ValidationError);
}

TEST_CASE("successful fetch is cached and replays offline byte-identically") {
    testing::TempDir dir;
    int calls = 0;
    const auto body = video_json(R"(,"commentCount":"42")");
    auto online = client_with(dir.path(), {HttpResponse{200, body, {}}}, &calls);
    const auto fetched = online.fetch("abc", day(2018, 3, 11));
    CHECK(fetched == sample_meta());
    CHECK(calls == 1);

    int offline_calls = 0;
    auto offline = client_with(dir.path(), {}, &offline_calls, true);
    const auto replayed = offline.fetch("abc", day(2020, 1, 1));
    CHECK(replayed == fetched);
    CHECK(*offline.cached_raw("abc") == body);
    CHECK(offline_calls == 0);
    CHECK(engagement_block(replayed).to_dense() == engagement_block(fetched).to_dense());
    CHECK_THROWS_AS((void)offline.fetch("missing", day(2020, 1, 1)), CacheMissError);
}

TEST_CASE("comments disabled in the response") {
    testing::TempDir dir;
    int calls = 0;
    auto client = client_with(dir.path(), {HttpResponse{200, video_json(""), {}}}, &calls);
    CHECK_FALSE(client.fetch("abc", day(2018, 3, 11)).comment_count.has_value());
}

TEST_CASE("typed fetch errors") {
    testing::TempDir dir;
    int calls = 0;
    auto not_found = client_with(dir.path(), {HttpResponse{200, R"({"items":[]})", {}}}, &calls);
    CHECK_THROWS_AS((void)not_found.fetch("zzz", day(2018, 3, 11)), NotFoundError);

    const std::string quota_body = R"({"error":{"errors":[{"reason":"quotaExceeded"}]}})";
    auto quota = client_with(dir.path(), {HttpResponse{403, quota_body, {{"retry-after", "3600"}}}}, &calls);
    try {
        (void)quota.fetch("abc", day(2018, 3, 11));
        FAIL("expected a quota error");
    } catch (const QuotaError &e) {
        REQUIRE(e.retry_after().has_value());
        CHECK(e.retry_after()->count() == 3600);
        CHECK(std::string(e.what()).find("retry after 3600 s") != std::string::npos);
    }

    auto auth = client_with(dir.path(), {HttpResponse{401, "{}", {}}}, &calls);
    CHECK_THROWS_AS((void)auth.fetch("abc", day(2018, 3, 11)), AuthError);
    auto bad_id = client_with(dir.path(), {}, &calls);
    CHECK_THROWS_AS((void)bad_id.fetch("../etc", day(2018, 3, 11)), ValidationError);
    auto garbage = client_with(dir.path(), {HttpResponse{200, "not json", {}}}, &calls);
    CHECK_THROWS_AS((void)garbage.fetch("abc", day(2018, 3, 11)), FetchError);
}
