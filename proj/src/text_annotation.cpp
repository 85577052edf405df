#include "misinfo/text_annotation.hpp"

#include "misinfo/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cctype>

namespace misinfo {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

std::string to_lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }
bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']' || c == '}'; }

// Lowercase, trailing period stripped.
constexpr std::array<std::string_view, 25> kAbbreviations{
    "mr", "mrs", "ms",  "dr",  "prof", "sr",   "jr",   "st",  "vs",  "e.g", "i.e", "inc", "ltd",
    "co", "corp", "fig", "approx", "dept", "u.s", "a.m", "p.m", "mt", "gen", "gov", "sen"};

bool is_abbreviation(std::string_view word) {
    while (!word.empty() && !is_alnum(word.front())) {
        word.remove_prefix(1);
    }
    const auto lower = to_lower(word);
    return std::find(kAbbreviations.begin(), kAbbreviations.end(), lower) != kAbbreviations.end();
}

std::string_view trim_view(std::string_view text) {
    while (!text.empty() && is_space(text.front())) {
        text.remove_prefix(1);
    }
    while (!text.empty() && is_space(text.back())) {
        text.remove_suffix(1);
    }
    return text;
}

Token make_token(std::string surface) {
    Token token;
    token.lower = to_lower(surface);
    token.surface = std::move(surface);
    const bool has_letter = std::any_of(token.surface.begin(), token.surface.end(), is_alpha);
    token.syllables = has_letter ? count_syllables(token.surface) : 1;
    return token;
}

bool is_leading_punct(char c) { return c == '"' || c == '(' || c == '[' || c == '{' || c == '`'; }

bool is_trailing_punct(char c) {
    return c == '.' || c == ',' || c == '!' || c == '?' || c == ';' || c == ':' || c == '"' || c == '\'' ||
           c == ')' || c == ']' || c == '}';
}

constexpr std::array<std::string_view, 6> kClitics{"'s", "'re", "'ve", "'ll", "'d", "'m"};

void split_contraction(const std::string &core, std::vector<Token> &out) {
    const auto lower = to_lower(core);
    if (lower.size() > 3 && lower.ends_with("n't")) {
        out.push_back(make_token(core.substr(0, core.size() - 3)));
        out.push_back(make_token(core.substr(core.size() - 3)));
        return;
    }
    for (const auto clitic : kClitics) {
        if (lower.size() > clitic.size() && lower.ends_with(clitic)) {
            const auto cut = core.size() - clitic.size();
            out.push_back(make_token(core.substr(0, cut)));
            out.push_back(make_token(core.substr(cut)));
            return;
        }
    }
    out.push_back(make_token(core));
}

std::string normalize_apostrophes(std::string_view text) {
    // U+2018 / U+2019 -> '
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
            static_cast<unsigned char>(text[i + 1]) == 0x80 &&
            (static_cast<unsigned char>(text[i + 2]) == 0x98 || static_cast<unsigned char>(text[i + 2]) == 0x99)) {
            out.push_back('\'');
            i += 2;
        } else {
            out.push_back(text[i]);
        }
    }
    return out;
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y'; }

}  // namespace

bool Token::is_word() const { return std::any_of(surface.begin(), surface.end(), is_alnum); }

bool AnnotatedText::has_pos() const {
    return !tokens.empty() && std::all_of(tokens.begin(), tokens.end(), [](const Token &t) { return t.pos.has_value(); });
}

std::size_t AnnotatedText::word_count() const {
    return static_cast<std::size_t>(std::count_if(tokens.begin(), tokens.end(), [](const Token &t) { return t.is_word(); }));
}

std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> sentences;
    std::size_t start = 0;
    std::size_t i = 0;
    const auto n = text.size();
    while (i < n) {
        if (!is_terminator(text[i])) {
            ++i;
            continue;
        }
        std::size_t end = i;
        while (end < n && is_terminator(text[end])) {
            ++end;
        }
        const bool single_period = end - i == 1 && text[i] == '.';
        while (end < n && is_closer(text[end])) {
            ++end;
        }
        if (end >= n || !is_space(text[end])) {
            i = end;
            continue;
        }
        std::size_t next = end;
        while (next < n && is_space(text[next])) {
            ++next;
        }
        std::size_t peek = next;
        while (peek < n && (text[peek] == '"' || text[peek] == '(' || text[peek] == '\'')) {
            ++peek;
        }
        const bool opens = peek < n && (is_upper(text[peek]) || is_digit(text[peek]));
        bool split = opens;
        if (split && single_period) {
            std::size_t word_start = i;
            while (word_start > start && !is_space(text[word_start - 1])) {
                --word_start;
            }
            split = !is_abbreviation(text.substr(word_start, i - word_start));
        }
        if (split) {
            const auto sentence = trim_view(text.substr(start, end - start));
            if (!sentence.empty()) {
                sentences.emplace_back(sentence);
            }
            start = next;
        }
        i = next;
    }
    if (start < n) {
        const auto tail = trim_view(text.substr(start));
        if (!tail.empty()) {
            sentences.emplace_back(tail);
        }
    }
    return sentences;
}

std::vector<Token> tokenize(std::string_view sentence) {
    const auto text = normalize_apostrophes(sentence);
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) {
            ++i;
        }
        std::size_t j = i;
        while (j < text.size() && !is_space(text[j])) {
            ++j;
        }
        if (j == i) {
            break;
        }
        std::string_view chunk(text.data() + i, j - i);
        i = j;

        while (chunk.size() > 1 && is_leading_punct(chunk.front())) {
            tokens.push_back(make_token(std::string(1, chunk.front())));
            chunk.remove_prefix(1);
        }
        std::vector<std::string> trailing;
        while (chunk.size() > 1 && is_trailing_punct(chunk.back())) {
            if (chunk.back() == '.') {
                std::size_t dots = 0;
                while (dots < chunk.size() && chunk[chunk.size() - 1 - dots] == '.') {
                    ++dots;
                }
                if (dots == chunk.size()) {
                    break;
                }
                trailing.emplace_back(dots, '.');
                chunk.remove_suffix(dots);
            } else {
                trailing.emplace_back(1, chunk.back());
                chunk.remove_suffix(1);
            }
        }
        if (!chunk.empty()) {
            split_contraction(std::string(chunk), tokens);
        }
        for (auto it = trailing.rbegin(); it != trailing.rend(); ++it) {
            tokens.push_back(make_token(*it));
        }
    }
    return tokens;
}

int count_syllables(std::string_view word) {
    std::string letters;
    for (const char c : word) {
        if (is_alpha(c)) {
            letters.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    if (letters.empty()) {
        throw ValidationError(fmt::format("count_syllables: '{}' has no letters", word));
    }
    int groups = 0;
    bool in_group = false;
    for (const char c : letters) {
        const bool vowel = is_vowel(c);
        if (vowel && !in_group) {
            ++groups;
        }
        in_group = vowel;
    }
    const auto n = letters.size();
    if (n >= 2 && letters[n - 1] == 'e' && !is_vowel(letters[n - 2])) {
        const bool consonant_le = n >= 3 && letters[n - 2] == 'l' && !is_vowel(letters[n - 3]);
        if (!consonant_le) {
            --groups;
        }
    }
    return std::max(groups, 1);
}

std::vector<std::pair<std::string, std::string>> parse_pos_line(std::string_view line) {
    std::vector<std::pair<std::string, std::string>> pairs;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_space(line[i])) {
            ++i;
        }
        std::size_t j = i;
        while (j < line.size() && !is_space(line[j])) {
            ++j;
        }
        if (j == i) {
            break;
        }
        const auto item = line.substr(i, j - i);
        const auto cut = item.rfind('_');
        if (cut == std::string_view::npos || cut == 0 || cut + 1 == item.size()) {
            throw ValidationError(fmt::format("POS item '{}' is not of the form token_TAG", item));
        }
        pairs.emplace_back(std::string(item.substr(0, cut)), std::string(item.substr(cut + 1)));
        i = j;
    }
    return pairs;
}

void attach_pos(AnnotatedText &annotated, std::span<const std::vector<std::pair<std::string, std::string>>> tagged) {
    if (tagged.size() != annotated.sentences.size()) {
        throw MissingModalityError(fmt::format("POS annotation has {} sentence(s), text has {}", tagged.size(),
                                               annotated.sentences.size()));
    }
    for (std::size_t s = 0; s < tagged.size(); ++s) {
        auto &sentence = annotated.sentences[s];
        if (tagged[s].size() != sentence.size()) {
            throw MissingModalityError(fmt::format("POS annotation misaligned at sentence {}: {} tag(s) for {} token(s)",
                                                   s + 1, tagged[s].size(), sentence.size()));
        }
        for (std::size_t t = 0; t < sentence.size(); ++t) {
            if (tagged[s][t].first != sentence[t].surface) {
                throw MissingModalityError(fmt::format("POS annotation misaligned at sentence {} token {}: '{}' vs '{}'",
                                                       s + 1, t + 1, tagged[s][t].first, sentence[t].surface));
            }
        }
    }
    std::size_t flat = 0;
    for (std::size_t s = 0; s < tagged.size(); ++s) {
        for (std::size_t t = 0; t < tagged[s].size(); ++t) {
            annotated.sentences[s][t].pos = tagged[s][t].second;
            annotated.tokens[flat++].pos = tagged[s][t].second;
        }
    }
}

AnnotatedText annotate(std::string_view text, const std::optional<std::vector<std::string>> &pos_lines) {
    AnnotatedText annotated;
    for (const auto &sentence : split_sentences(text)) {
        auto tokens = tokenize(sentence);
        if (tokens.empty()) {
            continue;
        }
        for (const auto &token : tokens) {
            if (token.is_word()) {
                annotated.char_count_letters += static_cast<std::size_t>(
                    std::count_if(token.surface.begin(), token.surface.end(), is_alnum));
            }
        }
        annotated.tokens.insert(annotated.tokens.end(), tokens.begin(), tokens.end());
        annotated.sentences.push_back(std::move(tokens));
    }
    if (pos_lines) {
        std::vector<std::vector<std::pair<std::string, std::string>>> tagged;
        tagged.reserve(pos_lines->size());
        try {
            for (const auto &line : *pos_lines) {
                tagged.push_back(parse_pos_line(line));
            }
        } catch (const ValidationError &e) {
            throw MissingModalityError(e.what());
        }
        attach_pos(annotated, tagged);
    }
    return annotated;
}

bool is_noun_tag(std::string_view tag) { return tag.starts_with("NN"); }
bool is_verb_tag(std::string_view tag) { return tag.starts_with("VB"); }
bool is_adjective_tag(std::string_view tag) { return tag.starts_with("JJ"); }
bool is_adverb_tag(std::string_view tag) { return tag == "RB" || tag == "RBR" || tag == "RBS"; }

bool is_auxiliary_form(std::string_view lower_word) {
    static constexpr std::array<std::string_view, 19> kAux{
        "be",  "am",  "is",    "are", "was",  "were", "been", "being", "'s",  "'re",
        "'m",  "have", "has",  "had", "having", "'ve", "do",  "does",  "did"};
    return std::find(kAux.begin(), kAux.end(), lower_word) != kAux.end();
}

bool pos_is_lexical(std::string_view tag, std::string_view lower_word) {
    if (is_noun_tag(tag) || is_adjective_tag(tag) || is_adverb_tag(tag)) {
        return true;
    }
    if (is_verb_tag(tag)) {
        return lower_word.empty() || !is_auxiliary_form(lower_word);
    }
    return false;
}

}  // namespace misinfo
