#ifndef MISINFO_METADATA_CLIENT_HPP
#define MISINFO_METADATA_CLIENT_HPP

#include "misinfo/corpus.hpp"
#include "misinfo/error.hpp"

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

namespace misinfo {

class FetchError : public Error {
  public:
    using Error::Error;
};

class NotFoundError : public FetchError {
  public:
    using FetchError::FetchError;
};

class AuthError : public FetchError {
  public:
    using FetchError::FetchError;
};

/// Daily quota exhausted or rate limited. retry_after is set when the server
/// said how long to wait.
class QuotaError : public FetchError {
  public:
    QuotaError(const std::string &message, std::optional<std::chrono::seconds> retry_after)
        : FetchError(message), retry_after_(retry_after) {}
    [[nodiscard]] std::optional<std::chrono::seconds> retry_after() const { return retry_after_; }

  private:
    std::optional<std::chrono::seconds> retry_after_;
};

/// Offline mode found nothing in the cache.
class CacheMissError : public FetchError {
  public:
    using FetchError::FetchError;
};

struct HttpResponse {
    int status{0};
    std::string body;
    std::map<std::string, std::string> headers;
};

class HttpTransport {
  public:
    virtual ~HttpTransport() = default;
    virtual HttpResponse get(const std::string &host, const std::string &path_and_query) = 0;
};

/// HTTPS transport backed by cpp-httplib.
[[nodiscard]] std::unique_ptr<HttpTransport> make_https_transport();

/// Raw response bodies stored as <dir>/<video_id>/<YYYY-MM-DD>.json.
class MetadataCache {
  public:
    explicit MetadataCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

    void store(std::string_view video_id, Date fetch_date, std::string_view raw) const;
    [[nodiscard]] std::optional<std::string> load(std::string_view video_id, Date fetch_date) const;

    /// Most recent entry for the id, with its fetch date.
    [[nodiscard]] std::optional<std::pair<Date, std::string>> latest(std::string_view video_id) const;

  private:
    [[nodiscard]] std::filesystem::path entry_path(std::string_view video_id, Date fetch_date) const;
    std::filesystem::path dir_;
};

/// ISO-8601 duration ("PT4M57S") to seconds.
[[nodiscard]] double parse_iso_duration(std::string_view text);

/// Decodes a videos.list response (parts snippet, statistics, contentDetails).
/// Missing commentCount means comments are disabled; missing dislikeCount
/// reads as 0. Throws NotFoundError when the item list is empty.
[[nodiscard]] EngagementMeta parse_video_response(std::string_view raw, std::string_view video_id, Date query_date);

struct MetadataClientOptions {
    std::string api_key;
    std::filesystem::path cache_dir;
    bool offline{false};
    std::chrono::milliseconds min_interval{200};
    std::string host{"www.googleapis.com"};
};

/// Fetches engagement metadata, serializing and spacing requests. Offline
/// mode only replays the cache and never touches the transport.
class MetadataClient {
  public:
    MetadataClient(MetadataClientOptions options, std::unique_ptr<HttpTransport> transport);

    [[nodiscard]] EngagementMeta fetch(const std::string &video_id, Date today);

    /// Raw bytes that produced the last successful fetch of the id.
    [[nodiscard]] std::optional<std::string> cached_raw(const std::string &video_id) const;

  private:
    HttpResponse request(const std::string &path_and_query);

    MetadataClientOptions options_;
    std::unique_ptr<HttpTransport> transport_;
    MetadataCache cache_;
    std::mutex mutex_;
    std::optional<std::chrono::steady_clock::time_point> last_request_;
};

}  // namespace misinfo

#endif  // MISINFO_METADATA_CLIENT_HPP
