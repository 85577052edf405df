#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "misinfo/metadata_client.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <thread>

namespace misinfo {

namespace {

class HttplibTransport : public HttpTransport {
  public:
    HttpResponse get(const std::string &host, const std::string &path_and_query) override {
        httplib::SSLClient client(host);
        client.set_connection_timeout(10, 0);
        client.set_read_timeout(30, 0);
        const auto result = client.Get(path_and_query);
        if (!result) {
            throw FetchError(fmt::format("request to {} failed: {}", host, httplib::to_string(result.error())));
        }
        HttpResponse response;
        response.status = result->status;
        response.body = result->body;
        for (const auto &[name, value] : result->headers) {
            std::string lower = name;
            std::transform(lower.begin(), lower.end(), lower.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            response.headers[lower] = value;
        }
        return response;
    }
};

bool valid_video_id(std::string_view id) {
    return !id.empty() && id.size() <= 64 && std::all_of(id.begin(), id.end(), [](unsigned char c) {
        return std::isalnum(c) != 0 || c == '-' || c == '_';
    });
}

std::uint64_t parse_count(const nlohmann::json &statistics, const char *key) {
    const auto &value = statistics.at(key);
    if (value.is_string()) {
        return std::stoull(value.get<std::string>());
    }
    return value.get<std::uint64_t>();
}

std::string error_reason(const std::string &body) {
    const auto json = nlohmann::json::parse(body, nullptr, false);
    if (json.is_discarded() || !json.contains("error")) {
        return {};
    }
    const auto &error = json["error"];
    if (error.contains("errors") && error["errors"].is_array() && !error["errors"].empty()) {
        return error["errors"][0].value("reason", "");
    }
    return error.value("status", "");
}

}  // namespace

std::unique_ptr<HttpTransport> make_https_transport() { return std::make_unique<HttplibTransport>(); }

std::filesystem::path MetadataCache::entry_path(std::string_view video_id, Date fetch_date) const {
    return dir_ / std::string(video_id) / (format_iso_date(fetch_date) + ".json");
}

void MetadataCache::store(std::string_view video_id, Date fetch_date, std::string_view raw) const {
    const auto path = entry_path(video_id, fetch_date);
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(fmt::format("cannot write cache entry '{}'", path.string()));
    }
    out.write(raw.data(), static_cast<std::streamsize>(raw.size()));
}

std::optional<std::string> MetadataCache::load(std::string_view video_id, Date fetch_date) const {
    std::ifstream in(entry_path(video_id, fetch_date), std::ios::binary);
    if (!in) {
        return std::nullopt;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::optional<std::pair<Date, std::string>> MetadataCache::latest(std::string_view video_id) const {
    const auto dir = dir_ / std::string(video_id);
    if (!std::filesystem::is_directory(dir)) {
        return std::nullopt;
    }
    std::optional<Date> newest;
    for (const auto &entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() != ".json") {
            continue;
        }
        try {
            const auto date = parse_iso_date(entry.path().stem().string());
            if (!newest || std::chrono::sys_days{date} > std::chrono::sys_days{*newest}) {
                newest = date;
            }
        } catch (const ValidationError &) {
        }
    }
    if (!newest) {
        return std::nullopt;
    }
    auto raw = load(video_id, *newest);
    if (!raw) {
        return std::nullopt;
    }
    return std::make_pair(*newest, std::move(*raw));
}

double parse_iso_duration(std::string_view text) {
    if (text.empty() || text.front() != 'P') {
        throw ValidationError(fmt::format("invalid ISO-8601 duration '{}'", text));
    }
    double seconds = 0.0;
    bool in_time = false;
    std::size_t i = 1;
    while (i < text.size()) {
        if (text[i] == 'T') {
            in_time = true;
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && (std::isdigit(static_cast<unsigned char>(text[j])) != 0 || text[j] == '.')) {
            ++j;
        }
        if (j == i || j >= text.size()) {
            throw ValidationError(fmt::format("invalid ISO-8601 duration '{}'", text));
        }
        const double value = std::stod(std::string(text.substr(i, j - i)));
        switch (text[j]) {
        case 'W': seconds += value * 7 * 86400; break;
        case 'D': seconds += value * 86400; break;
        case 'H': seconds += value * 3600; break;
        case 'M':
            if (!in_time) {
                throw ValidationError(fmt::format("month units are not supported in duration '{}'", text));
            }
            seconds += value * 60;
            break;
        case 'S': seconds += value; break;
        default: throw ValidationError(fmt::format("invalid ISO-8601 duration '{}'", text));
        }
        i = j + 1;
    }
    return seconds;
}

EngagementMeta parse_video_response(std::string_view raw, std::string_view video_id, Date query_date) {
    const auto json = nlohmann::json::parse(raw, nullptr, false);
    if (json.is_discarded() || !json.is_object()) {
        throw FetchError(fmt::format("malformed metadata response for '{}'", video_id));
    }
    if (!json.contains("items") || !json["items"].is_array() || json["items"].empty()) {
        throw NotFoundError(fmt::format("video '{}' not found or unavailable", video_id));
    }
    try {
        const auto &item = json["items"][0];
        const auto &snippet = item.at("snippet");
        const auto &statistics = item.at("statistics");
        EngagementMeta meta;
        meta.view_count = parse_count(statistics, "viewCount");
        meta.thumbs_up = statistics.contains("likeCount") ? parse_count(statistics, "likeCount") : 0;
        meta.thumbs_down = statistics.contains("dislikeCount") ? parse_count(statistics, "dislikeCount") : 0;
        if (statistics.contains("commentCount")) {
            meta.comment_count = parse_count(statistics, "commentCount");
        }
        meta.publish_date = parse_iso_date(snippet.at("publishedAt").get<std::string>());
        meta.query_date = query_date;
        meta.duration_s = parse_iso_duration(item.at("contentDetails").at("duration").get<std::string>());
        const auto &category = snippet.at("categoryId");
        meta.category_id = category.is_string() ? std::stoi(category.get<std::string>()) : category.get<int>();
        meta.validate();
        return meta;
    } catch (const nlohmann::json::exception &e) {
        throw FetchError(fmt::format("metadata response for '{}' lacks a field: {}", video_id, e.what()));
    } catch (const std::invalid_argument &) {
        throw FetchError(fmt::format("metadata response for '{}' has a non-numeric count", video_id));
    }
}

MetadataClient::MetadataClient(MetadataClientOptions options, std::unique_ptr<HttpTransport> transport)
    : options_(std::move(options)), transport_(std::move(transport)), cache_(options_.cache_dir) {}

HttpResponse MetadataClient::request(const std::string &path_and_query) {
    std::lock_guard lock(mutex_);
    if (last_request_) {
        const auto ready = *last_request_ + options_.min_interval;
        const auto now = std::chrono::steady_clock::now();
        if (now < ready) {
            std::this_thread::sleep_for(ready - now);
        }
    }
    last_request_ = std::chrono::steady_clock::now();
    return transport_->get(options_.host, path_and_query);
}

EngagementMeta MetadataClient::fetch(const std::string &video_id, Date today) {
    if (!valid_video_id(video_id)) {
        throw ValidationError(fmt::format("invalid video id '{}'", video_id));
    }
    if (options_.offline) {
        auto cached = cache_.latest(video_id);
        if (!cached) {
            throw CacheMissError(fmt::format("offline: no cached metadata for '{}'", video_id));
        }
        return parse_video_response(cached->second, video_id, cached->first);
    }
    if (!transport_) {
        throw FetchError("no transport configured for online fetch");
    }
    if (options_.api_key.empty()) {
        throw AuthError("an API key is required for online fetch");
    }
    const auto response = request(fmt::format("/youtube/v3/videos?part=snippet,statistics,contentDetails&id={}&key={}",
                                              video_id, httplib::detail::encode_query_param(options_.api_key)));
    if (response.status == 200) {
        auto meta = parse_video_response(response.body, video_id, today);
        cache_.store(video_id, today, response.body);
        return meta;
    }
    const auto reason = error_reason(response.body);
    std::optional<std::chrono::seconds> retry_after;
    if (const auto it = response.headers.find("retry-after"); it != response.headers.end()) {
        long long value = 0;
        const auto &text = it->second;
        if (std::from_chars(text.data(), text.data() + text.size(), value).ec == std::errc{}) {
            retry_after = std::chrono::seconds(value);
        }
    }
    if (response.status == 429 || reason == "quotaExceeded" || reason == "dailyLimitExceeded" ||
        reason == "rateLimitExceeded" || reason == "userRateLimitExceeded") {
        const auto hint = retry_after ? fmt::format("retry after {} s", retry_after->count())
                                      : std::string("daily quota resets at midnight Pacific time");
        throw QuotaError(fmt::format("quota exhausted fetching '{}' ({}); {}", video_id,
                                     reason.empty() ? "HTTP 429" : reason, hint),
                         retry_after);
    }
    if (response.status == 404 || reason == "videoNotFound") {
        throw NotFoundError(fmt::format("video '{}' not found", video_id));
    }
    if (response.status == 400 || response.status == 401 || response.status == 403) {
        throw AuthError(fmt::format("request for '{}' rejected with HTTP {} ({})", video_id, response.status,
                                    reason.empty() ? "no reason given" : reason));
    }
    throw FetchError(fmt::format("request for '{}' failed with HTTP {}", video_id, response.status));
}

std::optional<std::string> MetadataClient::cached_raw(const std::string &video_id) const {
    auto cached = cache_.latest(video_id);
    if (!cached) {
        return std::nullopt;
    }
    return std::move(cached->second);
}

}  // namespace misinfo
