#include "misinfo/linguistic_features.hpp"

#include "misinfo/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <set>
#include <string_view>

namespace misinfo {

namespace {

template <std::size_t N>
bool contains(const std::array<std::string_view, N> &list, std::string_view word) {
    return std::find(list.begin(), list.end(), word) != list.end();
}

constexpr std::array<std::string_view, 10> kToBe{"be", "being", "was", "were", "been", "are", "is", "am", "'re", "'m"};

constexpr std::array<std::string_view, 16> kAuxiliary{"will", "shall", "cannot", "may",  "need", "would",
                                                      "should", "could", "might", "must", "ought", "can",
                                                      "wo",     "ca",    "'ll",   "'d"};

constexpr std::array<std::string_view, 5> kConjunctions{"and", "but", "or", "yet", "nor"};

constexpr std::array<std::string_view, 41> kPronouns{
    "i",       "me",       "my",       "mine",     "myself",   "you",     "your",      "yours",      "yourself",
    "yourselves", "he",    "him",      "his",      "himself",  "she",     "her",       "hers",       "herself",
    "it",      "its",      "itself",   "we",       "us",       "our",     "ours",      "ourselves",  "they",
    "them",    "their",    "theirs",   "themselves", "one",    "someone", "something", "anyone",     "anything",
    "everyone", "everything", "nothing", "nobody", "somebody"};

constexpr std::array<std::string_view, 50> kPrepositions{
    "about",   "above",  "across", "after",   "against", "along",  "among",      "around",  "at",
    "before",  "behind", "below",  "beneath", "beside",  "between", "beyond",    "by",      "despite",
    "down",    "during", "except", "for",     "from",    "in",      "inside",     "into",    "like",
    "near",    "of",     "off",    "on",      "onto",    "out",     "outside",    "over",    "past",
    "since",   "through", "throughout", "to", "toward",  "towards", "under",      "underneath", "until",
    "up",      "upon",   "with",   "within",  "without"};

constexpr std::array<std::string_view, 9> kInterrogatives{"who", "whom", "whose", "what", "which",
                                                          "when", "where", "why", "how"};

constexpr std::array<std::string_view, 3> kArticles{"a", "an", "the"};

constexpr std::array<std::string_view, 15> kSubordinations{"after",  "although", "as",    "because", "before",
                                                           "if",     "once",     "since", "that",    "though",
                                                           "unless", "until",    "whereas", "whether", "while"};

bool is_nominalization(std::string_view word) {
    static constexpr std::array<std::string_view, 8> kSuffixes{"tion", "tions", "ment", "ments",
                                                               "ence", "ences", "ance", "ances"};
    return word.size() > 5 && std::any_of(kSuffixes.begin(), kSuffixes.end(),
                                          [&](std::string_view s) { return word.ends_with(s); });
}

std::size_t alnum_count(std::string_view text) {
    return static_cast<std::size_t>(
        std::count_if(text.begin(), text.end(), [](unsigned char c) { return std::isalnum(c) != 0; }));
}

}  // namespace

const FeatureNames &readability_feature_names() {
    static const FeatureNames names = std::make_shared<const std::vector<std::string>>(std::vector<std::string>{
        "characters",        "syllables",          "words",           "wordtypes",
        "sentences",         "paragraphs",         "long_words",      "complex_words",
        "complex_words_dc",  "characters_per_word", "syll_per_word",  "words_per_sentence",
        "sentences_per_paragraph", "type_token_ratio",
        "tobeverb",          "auxverb",            "conjunction",     "pronoun",
        "preposition",       "nominalization",
        "begin_pronoun",     "begin_interrogative", "begin_article",  "begin_subordination",
        "begin_conjunction", "begin_preposition",
        "ARI",               "Kincaid",            "FleschReadingEase", "ColemanLiau",
        "GunningFogIndex",   "LIX",                "SMOGIndex",       "RIX",
        "DaleChallIndex"});
    return names;
}

ReadabilityCounts readability_counts(const AnnotatedText &annotated, const WordSet &familiar_words) {
    ReadabilityCounts counts;
    std::set<std::string_view> types;
    for (const auto &sentence : annotated.sentences) {
        bool sentence_has_word = false;
        for (const auto &token : sentence) {
            if (!token.is_word()) {
                continue;
            }
            sentence_has_word = true;
            const auto chars = alnum_count(token.surface);
            ++counts.words;
            counts.characters += chars;
            counts.syllables += static_cast<std::size_t>(token.syllables);
            types.insert(token.lower);
            if (chars >= 7) {
                ++counts.long_words;
            }
            if (token.syllables >= 3) {
                ++counts.complex_words;
            }
            if (!familiar_words.contains(token.lower)) {
                ++counts.difficult_words;
            }
        }
        if (sentence_has_word) {
            ++counts.sentences;
        }
    }
    counts.word_types = types.size();
    return counts;
}

FeatureBlock readability_features(const AnnotatedText &annotated, const WordSet &familiar_words) {
    const auto c = readability_counts(annotated, familiar_words);
    if (c.sentences == 0 || c.words == 0) {
        throw ValidationError("readability_features: text has no sentence or no word");
    }
    const double words = static_cast<double>(c.words);
    const double sentences = static_cast<double>(c.sentences);
    const double paragraphs = 1.0;

    std::array<std::size_t, 6> usage{};
    for (const auto &token : annotated.tokens) {
        if (!token.is_word()) {
            continue;
        }
        const std::string_view w = token.lower;
        usage[0] += contains(kToBe, w) ? 1 : 0;
        usage[1] += contains(kAuxiliary, w) ? 1 : 0;
        usage[2] += contains(kConjunctions, w) ? 1 : 0;
        usage[3] += contains(kPronouns, w) ? 1 : 0;
        usage[4] += contains(kPrepositions, w) ? 1 : 0;
        usage[5] += is_nominalization(w) ? 1 : 0;
    }
    std::array<std::size_t, 6> beginnings{};
    for (const auto &sentence : annotated.sentences) {
        const auto first = std::find_if(sentence.begin(), sentence.end(), [](const Token &t) { return t.is_word(); });
        if (first == sentence.end()) {
            continue;
        }
        const std::string_view w = first->lower;
        beginnings[0] += contains(kPronouns, w) ? 1 : 0;
        beginnings[1] += contains(kInterrogatives, w) ? 1 : 0;
        beginnings[2] += contains(kArticles, w) ? 1 : 0;
        beginnings[3] += contains(kSubordinations, w) ? 1 : 0;
        beginnings[4] += contains(kConjunctions, w) ? 1 : 0;
        beginnings[5] += contains(kPrepositions, w) ? 1 : 0;
    }

    const double chars_per_word = static_cast<double>(c.characters) / words;
    const double syll_per_word = static_cast<double>(c.syllables) / words;
    const double words_per_sentence = words / sentences;
    const double complex = static_cast<double>(c.complex_words);
    const double long_words = static_cast<double>(c.long_words);
    const double pct_difficult = 100.0 * static_cast<double>(c.difficult_words) / words;

    std::vector<double> v;
    v.reserve(kReadabilityDim);
    v.push_back(static_cast<double>(c.characters));
    v.push_back(static_cast<double>(c.syllables));
    v.push_back(words);
    v.push_back(static_cast<double>(c.word_types));
    v.push_back(sentences);
    v.push_back(paragraphs);
    v.push_back(long_words);
    v.push_back(complex);
    v.push_back(static_cast<double>(c.difficult_words));
    v.push_back(chars_per_word);
    v.push_back(syll_per_word);
    v.push_back(words_per_sentence);
    v.push_back(sentences / paragraphs);
    v.push_back(static_cast<double>(c.word_types) / words);
    for (const auto count : usage) {
        v.push_back(static_cast<double>(count) / words);
    }
    for (const auto count : beginnings) {
        v.push_back(static_cast<double>(count) / sentences);
    }

    v.push_back(4.71 * chars_per_word + 0.5 * words_per_sentence - 21.43);                        // ARI
    v.push_back(0.39 * words_per_sentence + 11.8 * syll_per_word - 15.59);                        // Kincaid
    v.push_back(206.835 - 1.015 * words_per_sentence - 84.6 * syll_per_word);                     // Flesch
    v.push_back(0.0588 * (100.0 * chars_per_word) - 0.296 * (100.0 * sentences / words) - 15.8);  // Coleman-Liau
    v.push_back(0.4 * (words_per_sentence + 100.0 * complex / words));                            // Gunning Fog
    v.push_back(words_per_sentence + 100.0 * long_words / words);                                 // LIX
    v.push_back(1.043 * std::sqrt(complex * 30.0 / sentences) + 3.1291);                          // SMOG
    v.push_back(long_words / sentences);                                                          // RIX
    double dale_chall = 0.1579 * pct_difficult + 0.0496 * words_per_sentence;
    if (pct_difficult > 5.0) {
        dale_chall += 3.6365;
    }
    v.push_back(dale_chall);

    return make_dense_block(BlockKind::Readability, readability_feature_names(), std::move(v));
}

FeatureNames lexicon_feature_names(const Lexicon &lexicon) {
    std::vector<std::string> names;
    names.reserve(lexicon.size());
    for (const auto &category : lexicon.categories()) {
        names.push_back(category.name);
    }
    return std::make_shared<const std::vector<std::string>>(std::move(names));
}

FeatureBlock lexicon_features(const AnnotatedText &annotated, const Lexicon &lexicon) {
    if (lexicon.empty()) {
        throw ValidationError("lexicon_features: empty lexicon");
    }
    std::vector<double> matched(lexicon.size(), 0.0);
    std::size_t words = 0;
    for (const auto &token : annotated.tokens) {
        if (!token.is_word()) {
            continue;
        }
        ++words;
        for (std::size_t c = 0; c < lexicon.size(); ++c) {
            if (lexicon.matches(c, token.lower)) {
                matched[c] += 1.0;
            }
        }
    }
    if (words == 0) {
        throw ValidationError("lexicon_features: text has no words");
    }
    for (auto &value : matched) {
        value = 100.0 * value / static_cast<double>(words);
    }
    return make_dense_block(BlockKind::Lexicon, lexicon_feature_names(lexicon), std::move(matched));
}

}  // namespace misinfo
