#include "misinfo/corpus.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace misinfo {

namespace {

bool is_blank(std::string_view line) {
    return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

std::string trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n\f\v");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = text.find_last_not_of(" \t\r\n\f\v");
    return std::string(text.substr(first, last - first + 1));
}

std::string read_text_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(fmt::format("cannot open '{}'", path.string()));
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::vector<std::string> read_nonblank_lines(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(fmt::format("cannot open '{}'", path.string()));
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!is_blank(line)) {
            lines.push_back(trim(line));
        }
    }
    return lines;
}

// Collects issues for one manifest line; the record is kept only when no
// issue was raised for it.
class LineReader {
  public:
    LineReader(const nlohmann::json &object, std::size_t line, std::vector<ManifestIssue> &issues)
        : object_(object), line_(line), issues_(issues) {}

    [[nodiscard]] bool ok() const { return ok_; }

    void fail(std::string field, std::string message) {
        ok_ = false;
        issues_.push_back({line_, std::move(field), std::move(message)});
    }

    const nlohmann::json *find(const char *key, bool required) {
        const auto it = object_.find(key);
        if (it == object_.end() || it->is_null()) {
            if (required) {
                fail(key, fmt::format("missing required field '{}' at line {}", key, line_));
            }
            return nullptr;
        }
        return &*it;
    }

    std::optional<std::string> string_field(const char *key, bool required) {
        const auto *value = find(key, required);
        if (value == nullptr) {
            return std::nullopt;
        }
        if (!value->is_string()) {
            fail(key, fmt::format("field '{}' must be a string at line {}", key, line_));
            return std::nullopt;
        }
        return value->get<std::string>();
    }

    std::optional<std::int64_t> integer_field(const char *key, bool required) {
        const auto *value = find(key, required);
        if (value == nullptr) {
            return std::nullopt;
        }
        if (!value->is_number_integer()) {
            fail(key, fmt::format("field '{}' must be an integer at line {}", key, line_));
            return std::nullopt;
        }
        return value->get<std::int64_t>();
    }

    std::optional<std::uint64_t> count_field(const char *key, bool required) {
        const auto value = integer_field(key, required);
        if (!value) {
            return std::nullopt;
        }
        if (*value < 0) {
            fail(key, fmt::format("field '{}' must be non-negative at line {}", key, line_));
            return std::nullopt;
        }
        return static_cast<std::uint64_t>(*value);
    }

    std::optional<double> real_field(const char *key, bool required) {
        const auto *value = find(key, required);
        if (value == nullptr) {
            return std::nullopt;
        }
        if (!value->is_number()) {
            fail(key, fmt::format("field '{}' must be a number at line {}", key, line_));
            return std::nullopt;
        }
        return value->get<double>();
    }

    std::optional<Date> date_field(const char *key) {
        const auto text = string_field(key, true);
        if (!text) {
            return std::nullopt;
        }
        try {
            return parse_iso_date(*text);
        } catch (const ValidationError &) {
            fail(key, fmt::format("field '{}' is not an ISO-8601 date at line {}", key, line_));
            return std::nullopt;
        }
    }

  private:
    const nlohmann::json &object_;
    std::size_t line_;
    std::vector<ManifestIssue> &issues_;
    bool ok_{true};
};

std::filesystem::path resolve(const std::filesystem::path &base, const std::string &path) {
    std::filesystem::path p(path);
    return p.is_absolute() ? p : base / p;
}

}  // namespace

std::string_view to_string(Label label) {
    return label == Label::Trustworthy ? "Trustworthy" : "Misinformative";
}

Label binarize_label(int score) {
    if (score < 1 || score > 5) {
        throw ValidationError(fmt::format("score {} out of range 1..5", score));
    }
    return score == 1 ? Label::Trustworthy : Label::Misinformative;
}

Date parse_iso_date(std::string_view text) {
    if (const auto t = text.find('T'); t != std::string_view::npos) {
        text = text.substr(0, t);
    }
    const auto bad = [&] { return ValidationError(fmt::format("invalid ISO-8601 date '{}'", text)); };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw bad();
    }
    const auto number = [&](std::size_t pos, std::size_t len) {
        int value = 0;
        const auto *first = text.data() + pos;
        const auto [ptr, ec] = std::from_chars(first, first + len, value);
        if (ec != std::errc{} || ptr != first + len) {
            throw bad();
        }
        return value;
    };
    const Date date{std::chrono::year{number(0, 4)}, std::chrono::month{static_cast<unsigned>(number(5, 2))},
                    std::chrono::day{static_cast<unsigned>(number(8, 2))}};
    if (!date.ok()) {
        throw bad();
    }
    return date;
}

std::string format_iso_date(Date date) {
    return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(date.year()), static_cast<unsigned>(date.month()),
                       static_cast<unsigned>(date.day()));
}

bool is_registered_category(int category_id) {
    return std::find(kCategoryRegistry.begin(), kCategoryRegistry.end(), category_id) != kCategoryRegistry.end();
}

void EngagementMeta::validate() const {
    if (std::chrono::sys_days{query_date} < std::chrono::sys_days{publish_date}) {
        throw ValidationError(fmt::format("query_date {} precedes publish_date {}", format_iso_date(query_date),
                                          format_iso_date(publish_date)));
    }
    if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
        throw ValidationError(fmt::format("duration_s must be a positive finite number, got {}", duration_s));
    }
    if (!is_registered_category(category_id)) {
        throw ValidationError(fmt::format("category_id {} is not in the category registry", category_id));
    }
}

ManifestError::ManifestError(std::vector<ManifestIssue> issues)
    : ValidationError([&] {
          std::string message = fmt::format("manifest has {} issue(s)", issues.size());
          for (const auto &issue : issues) {
              message += "\n  " + issue.message;
          }
          return message;
      }()),
      issues_(std::move(issues)) {}

ManifestReadResult read_manifest(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(fmt::format("cannot open manifest '{}'", path.string()));
    }
    const auto base = path.parent_path();
    ManifestReadResult result;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    std::size_t non_blank = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) {
            continue;
        }
        ++non_blank;
        nlohmann::json object;
        try {
            object = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error &e) {
            result.issues.push_back({line_no, "", fmt::format("malformed line {}: {}", line_no, e.what())});
            continue;
        }
        if (!object.is_object()) {
            result.issues.push_back({line_no, "", fmt::format("malformed line {}: expected an object", line_no)});
            continue;
        }

        LineReader reader(object, line_no, result.issues);
        VideoRecord record;
        if (auto id = reader.string_field("id", true)) {
            if (trim(*id).empty()) {
                reader.fail("id", fmt::format("empty id at line {}", line_no));
            } else if (!seen_ids.insert(*id).second) {
                reader.fail("id", fmt::format("duplicate id '{}' at line {}", *id, line_no));
            }
            record.id = *id;
        }
        if (const auto score = reader.integer_field("score", true)) {
            if (*score < 1 || *score > 5) {
                reader.fail("score", fmt::format("score out of range at line {}", line_no));
            } else {
                record.score = static_cast<int>(*score);
                record.label = binarize_label(record.score);
            }
        }

        auto &meta = record.engagement;
        meta.view_count = reader.count_field("views", true).value_or(0);
        meta.thumbs_up = reader.count_field("thumbs_up", true).value_or(0);
        meta.thumbs_down = reader.count_field("thumbs_down", true).value_or(0);
        meta.comment_count = reader.count_field("comment_count", false);
        const auto publish = reader.date_field("publish_date");
        const auto query = reader.date_field("query_date");
        const auto duration = reader.real_field("duration_s", true);
        const auto category = reader.integer_field("category_id", true);
        if (publish && query) {
            meta.publish_date = *publish;
            meta.query_date = *query;
            if (std::chrono::sys_days{*query} < std::chrono::sys_days{*publish}) {
                reader.fail("query_date", fmt::format("query_date precedes publish_date at line {}", line_no));
            }
        }
        if (duration) {
            if (!(*duration > 0.0) || !std::isfinite(*duration)) {
                reader.fail("duration_s", fmt::format("duration_s must be positive at line {}", line_no));
            }
            meta.duration_s = *duration;
        }
        if (category) {
            if (!is_registered_category(static_cast<int>(*category))) {
                reader.fail("category_id", fmt::format("category_id {} not in registry at line {}", *category, line_no));
            }
            meta.category_id = static_cast<int>(*category);
        }

        if (const auto transcript = reader.string_field("transcript_path", true)) {
            try {
                record.transcript = read_text_file(resolve(base, *transcript));
                if (trim(record.transcript).empty()) {
                    reader.fail("transcript_path", fmt::format("empty transcript at line {}", line_no));
                }
            } catch (const Error &e) {
                reader.fail("transcript_path", fmt::format("{} at line {}", e.what(), line_no));
            }
        }
        if (const auto parse = reader.string_field("parse_path", false)) {
            try {
                record.parse_trees = read_nonblank_lines(resolve(base, *parse));
            } catch (const Error &e) {
                reader.fail("parse_path", fmt::format("{} at line {}", e.what(), line_no));
            }
        }
        if (const auto pos = reader.string_field("pos_path", false)) {
            try {
                record.pos_lines = read_nonblank_lines(resolve(base, *pos));
            } catch (const Error &e) {
                reader.fail("pos_path", fmt::format("{} at line {}", e.what(), line_no));
            }
        }
        if (const auto audio = reader.string_field("audio_path", false)) {
            auto audio_path = resolve(base, *audio);
            if (!std::filesystem::is_regular_file(audio_path)) {
                reader.fail("audio_path", fmt::format("audio file '{}' not found at line {}", audio_path.string(), line_no));
            }
            record.audio_path = std::move(audio_path);
        }

        if (reader.ok()) {
            result.records.push_back(std::move(record));
        }
    }
    if (non_blank == 0) {
        result.issues.push_back({0, "", "empty manifest"});
    }
    return result;
}

std::vector<VideoRecord> load_manifest(const std::filesystem::path &path) {
    auto result = read_manifest(path);
    if (!result.issues.empty()) {
        throw ManifestError(std::move(result.issues));
    }
    return std::move(result.records);
}

std::size_t count_words(std::string_view text) {
    std::size_t words = 0;
    bool in_chunk = false;
    bool chunk_has_alnum = false;
    for (const char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isspace(c) != 0) {
            if (in_chunk && chunk_has_alnum) {
                ++words;
            }
            in_chunk = false;
            chunk_has_alnum = false;
        } else {
            in_chunk = true;
            chunk_has_alnum = chunk_has_alnum || std::isalnum(c) != 0;
        }
    }
    if (in_chunk && chunk_has_alnum) {
        ++words;
    }
    return words;
}

CorpusStats corpus_stats(const std::vector<VideoRecord> &records) {
    if (records.empty()) {
        throw ValidationError("corpus_stats: empty corpus");
    }
    CorpusStats stats;
    stats.n_records = records.size();
    double duration_trust = 0.0;
    double duration_misinfo = 0.0;
    for (const auto &record : records) {
        if (record.label == Label::Trustworthy) {
            ++stats.n_trustworthy;
            duration_trust += record.engagement.duration_s;
        } else {
            ++stats.n_misinformative;
            duration_misinfo += record.engagement.duration_s;
        }
        stats.total_words += count_words(record.transcript);
    }
    if (stats.n_trustworthy > 0) {
        stats.mean_duration_trustworthy = duration_trust / static_cast<double>(stats.n_trustworthy);
    }
    if (stats.n_misinformative > 0) {
        stats.mean_duration_misinformative = duration_misinfo / static_cast<double>(stats.n_misinformative);
    }
    stats.mean_words_per_transcript = static_cast<double>(stats.total_words) / static_cast<double>(stats.n_records);
    return stats;
}

}  // namespace misinfo
