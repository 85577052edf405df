#ifndef MISINFO_TEXT_ANNOTATION_HPP
#define MISINFO_TEXT_ANNOTATION_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace misinfo {

struct Token {
    std::string surface;
    std::string lower;
    std::optional<std::string> pos;
    int syllables{1};

    /// True when the token carries at least one letter or digit; punctuation
    /// tokens are excluded from every word count.
    [[nodiscard]] bool is_word() const;
};

struct AnnotatedText {
    std::vector<std::vector<Token>> sentences;
    std::vector<Token> tokens;  // concatenation of sentences
    std::size_t char_count_letters{0};

    [[nodiscard]] bool has_pos() const;
    [[nodiscard]] std::size_t word_count() const;
};

/// Splits on '.', '!' or '?' (plus trailing closing quotes/brackets) followed
/// by whitespace and an uppercase letter or digit. A period ending a known
/// abbreviation ("Dr.", "e.g.") never splits.
[[nodiscard]] std::vector<std::string> split_sentences(std::string_view text);

/// Whitespace split, detached edge punctuation, contraction suffixes split off
/// ("don't" -> "do" "n't", "It's" -> "It" "'s").
[[nodiscard]] std::vector<Token> tokenize(std::string_view sentence);

/// Vowel-group heuristic with silent final 'e'; throws ValidationError when
/// the word has no letters.
[[nodiscard]] int count_syllables(std::string_view word);

/// Sentence split + tokenization + syllables. When pos_lines is given it must
/// hold one "token_TAG" line per sentence aligned 1:1 with the tokenizer;
/// misalignment throws MissingModalityError.
[[nodiscard]] AnnotatedText annotate(std::string_view text,
                                     const std::optional<std::vector<std::string>> &pos_lines = std::nullopt);

/// Attaches tags to an already annotated text; same alignment rules.
void attach_pos(AnnotatedText &annotated, std::span<const std::vector<std::pair<std::string, std::string>>> tagged);

/// "tok_TAG tok_TAG ..." -> (token, tag) pairs, split at the last '_'.
[[nodiscard]] std::vector<std::pair<std::string, std::string>> parse_pos_line(std::string_view line);

/// Penn tag classes.
[[nodiscard]] bool is_noun_tag(std::string_view tag);
[[nodiscard]] bool is_verb_tag(std::string_view tag);
[[nodiscard]] bool is_adjective_tag(std::string_view tag);
[[nodiscard]] bool is_adverb_tag(std::string_view tag);

/// Auxiliary forms excluded from lexical verbs (be/have/do paradigms).
[[nodiscard]] bool is_auxiliary_form(std::string_view lower_word);

/// Lexical = noun, adjective, adverb, or verb. MD and every closed-class tag
/// are functional; unknown tags are functional. When the word is supplied,
/// auxiliary forms tagged VB* are functional too.
[[nodiscard]] bool pos_is_lexical(std::string_view tag, std::string_view lower_word = {});

}  // namespace misinfo

#endif  // MISINFO_TEXT_ANNOTATION_HPP
