#ifndef MISINFO_CORPUS_HPP
#define MISINFO_CORPUS_HPP

#include "misinfo/error.hpp"

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace misinfo {

enum class Label { Trustworthy, Misinformative };

[[nodiscard]] std::string_view to_string(Label label);

/// Score 1 is trustworthy, scores 2..5 are misinformative.
[[nodiscard]] Label binarize_label(int score);

using Date = std::chrono::year_month_day;

/// Parses "YYYY-MM-DD"; a trailing "T..." time part (as returned by web APIs)
/// is accepted and ignored.
[[nodiscard]] Date parse_iso_date(std::string_view text);
[[nodiscard]] std::string format_iso_date(Date date);

/// The 32 video category codes of the hosting platform, in ascending order.
inline constexpr std::array<int, 32> kCategoryRegistry{
    1,  2,  10, 15, 17, 18, 19, 20, 21, 22, 23, 24, 25, 26, 27, 28,
    29, 30, 31, 32, 33, 34, 35, 36, 37, 38, 39, 40, 41, 42, 43, 44};

[[nodiscard]] bool is_registered_category(int category_id);

struct EngagementMeta {
    std::uint64_t view_count{0};
    Date publish_date{};
    Date query_date{};
    std::optional<std::uint64_t> comment_count;  // absent: comments disabled
    std::uint64_t thumbs_up{0};
    std::uint64_t thumbs_down{0};
    double duration_s{0.0};
    int category_id{0};

    /// Throws ValidationError naming the offending field.
    void validate() const;

    friend bool operator==(const EngagementMeta &, const EngagementMeta &) = default;
};

struct VideoRecord {
    std::string id;
    std::string transcript;
    std::optional<std::vector<std::string>> parse_trees;  // one bracketed tree per sentence
    std::optional<std::vector<std::string>> pos_lines;    // one "tok_TAG ..." line per sentence
    std::optional<std::filesystem::path> audio_path;
    EngagementMeta engagement;
    int score{1};
    Label label{Label::Trustworthy};

    [[nodiscard]] bool has_parse_trees() const { return parse_trees.has_value(); }
    [[nodiscard]] bool has_audio() const { return audio_path.has_value(); }
};

struct ManifestIssue {
    std::size_t line{0};
    std::string field;
    std::string message;
};

class ManifestError : public ValidationError {
  public:
    explicit ManifestError(std::vector<ManifestIssue> issues);
    [[nodiscard]] const std::vector<ManifestIssue> &issues() const noexcept { return issues_; }

  private:
    std::vector<ManifestIssue> issues_;
};

/// Result of a non-throwing manifest read: every valid record plus one issue
/// per problem found. Relative paths resolve against the manifest directory.
struct ManifestReadResult {
    std::vector<VideoRecord> records;
    std::vector<ManifestIssue> issues;
};

[[nodiscard]] ManifestReadResult read_manifest(const std::filesystem::path &path);

/// Strict variant: throws ManifestError listing every issue, or Error when the
/// file cannot be opened.
[[nodiscard]] std::vector<VideoRecord> load_manifest(const std::filesystem::path &path);

struct CorpusStats {
    std::size_t n_records{0};
    std::size_t n_trustworthy{0};
    std::size_t n_misinformative{0};
    std::optional<double> mean_duration_trustworthy;
    std::optional<double> mean_duration_misinformative;
    std::size_t total_words{0};
    double mean_words_per_transcript{0.0};
};

[[nodiscard]] CorpusStats corpus_stats(const std::vector<VideoRecord> &records);

/// Whitespace-delimited chunks that contain at least one letter or digit.
[[nodiscard]] std::size_t count_words(std::string_view text);

}  // namespace misinfo

#endif  // MISINFO_CORPUS_HPP
