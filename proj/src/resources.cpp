#include "misinfo/resources.hpp"

#include "misinfo/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace misinfo {

namespace {

std::string lowercase(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string_view strip(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())) != 0) {
        text.remove_prefix(1);
    }
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())) != 0) {
        text.remove_suffix(1);
    }
    return text;
}

}  // namespace

Lexicon::Lexicon(std::vector<Category> categories) : categories_(std::move(categories)) {
    for (std::size_t i = 0; i < categories_.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (categories_[i].name == categories_[j].name) {
                throw ValidationError(fmt::format("duplicate lexicon category '{}'", categories_[i].name));
            }
        }
        if (categories_[i].exact.empty() && categories_[i].prefixes.empty()) {
            throw ValidationError(fmt::format("lexicon category '{}' has no patterns", categories_[i].name));
        }
    }
}

void Lexicon::add(std::string_view category, std::string_view pattern) {
    const auto name = std::string(strip(category));
    auto word = lowercase(strip(pattern));
    if (name.empty()) {
        throw ValidationError("lexicon category name is empty");
    }
    if (word.empty() || word == "*") {
        throw ValidationError(fmt::format("lexicon category '{}' has an empty pattern", name));
    }
    auto it = std::find_if(categories_.begin(), categories_.end(), [&](const Category &c) { return c.name == name; });
    if (it == categories_.end()) {
        categories_.push_back({name, {}, {}});
        it = std::prev(categories_.end());
    }
    if (word.back() == '*') {
        word.pop_back();
        it->prefixes.push_back(std::move(word));
    } else {
        it->exact.push_back(std::move(word));
    }
}

bool Lexicon::matches(std::size_t category, std::string_view lower_word) const {
    const auto &c = categories_.at(category);
    if (std::find(c.exact.begin(), c.exact.end(), lower_word) != c.exact.end()) {
        return true;
    }
    return std::any_of(c.prefixes.begin(), c.prefixes.end(),
                       [&](const std::string &prefix) { return lower_word.starts_with(prefix); });
}

Lexicon parse_lexicon(std::string_view text) {
    Lexicon lexicon;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        const auto content = strip(line);
        if (content.empty() || content.front() == '#') {
            continue;
        }
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw ValidationError(fmt::format("lexicon line {}: expected 'category<TAB>pattern'", line_no));
        }
        try {
            lexicon.add(std::string_view(line).substr(0, tab), std::string_view(line).substr(tab + 1));
        } catch (const ValidationError &e) {
            throw ValidationError(fmt::format("lexicon line {}: {}", line_no, e.what()));
        }
    }
    return lexicon;
}

Lexicon load_lexicon(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(fmt::format("cannot open lexicon '{}'", path.string()));
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_lexicon(buffer.str());
}

std::vector<std::string> load_word_lines(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(fmt::format("cannot open word list '{}'", path.string()));
    }
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        const auto content = strip(line);
        if (content.empty() || content.front() == '#') {
            continue;
        }
        words.push_back(lowercase(content));
    }
    return words;
}

WordSet load_word_set(const std::filesystem::path &path) {
    auto words = load_word_lines(path);
    return WordSet(std::make_move_iterator(words.begin()), std::make_move_iterator(words.end()));
}

RankedWordList::RankedWordList(std::vector<std::string> ranked, std::size_t top_n) : size_(ranked.size()) {
    const auto keep = std::min(top_n, ranked.size());
    for (std::size_t i = 0; i < keep; ++i) {
        common_.insert(lowercase(ranked[i]));
    }
}

bool RankedWordList::is_common(std::string_view lower_word) const { return common_.contains(std::string(lower_word)); }

RankedWordList load_ranked_wordlist(const std::filesystem::path &path, std::size_t top_n) {
    return RankedWordList(load_word_lines(path), top_n);
}

}  // namespace misinfo
