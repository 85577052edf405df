#ifndef MISINFO_RESOURCES_HPP
#define MISINFO_RESOURCES_HPP

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace misinfo {

/// Word-class lexicon in the tab-separated "category<TAB>pattern" format.
/// A pattern ending in '*' matches by prefix; anything else matches exactly.
/// Categories keep the order of their first appearance in the file.
class Lexicon {
  public:
    struct Category {
        std::string name;
        std::vector<std::string> exact;
        std::vector<std::string> prefixes;
    };

    Lexicon() = default;
    explicit Lexicon(std::vector<Category> categories);

    [[nodiscard]] std::size_t size() const { return categories_.size(); }
    [[nodiscard]] bool empty() const { return categories_.empty(); }
    [[nodiscard]] const std::vector<Category> &categories() const { return categories_; }

    /// Adds a pattern, creating the category on first use.
    void add(std::string_view category, std::string_view pattern);

    [[nodiscard]] bool matches(std::size_t category, std::string_view lower_word) const;

  private:
    std::vector<Category> categories_;
};

[[nodiscard]] Lexicon parse_lexicon(std::string_view text);
[[nodiscard]] Lexicon load_lexicon(const std::filesystem::path &path);

using WordSet = std::unordered_set<std::string>;

/// One word per line, lowercased; blank lines and '#' comments skipped.
[[nodiscard]] std::vector<std::string> load_word_lines(const std::filesystem::path &path);
[[nodiscard]] WordSet load_word_set(const std::filesystem::path &path);

/// Frequency-ranked reference list; the first `top_n` entries are the common
/// words, everything else counts as sophisticated.
class RankedWordList {
  public:
    static constexpr std::size_t kDefaultTopN = 2000;

    RankedWordList() = default;
    explicit RankedWordList(std::vector<std::string> ranked, std::size_t top_n = kDefaultTopN);

    [[nodiscard]] bool is_common(std::string_view lower_word) const;
    [[nodiscard]] bool is_sophisticated(std::string_view lower_word) const { return !is_common(lower_word); }
    [[nodiscard]] std::size_t size() const { return size_; }

  private:
    WordSet common_;
    std::size_t size_{0};
};

[[nodiscard]] RankedWordList load_ranked_wordlist(const std::filesystem::path &path,
                                                  std::size_t top_n = RankedWordList::kDefaultTopN);

}  // namespace misinfo

#endif  // MISINFO_RESOURCES_HPP
