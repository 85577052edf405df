#ifndef MISINFO_LINGUISTIC_FEATURES_HPP
#define MISINFO_LINGUISTIC_FEATURES_HPP

#include "misinfo/feature_block.hpp"
#include "misinfo/resources.hpp"
#include "misinfo/text_annotation.hpp"

#include <cstddef>
#include <cstdint>

namespace misinfo {

inline constexpr std::size_t kReadabilityDim = 35;
inline constexpr std::size_t kLexRichDim = 33;

/// Slot layout of the readability block:
///   [0, 14)  surface statistics  (characters .. type_token_ratio)
///   [14, 20) word usage, as proportions of words
///   [20, 26) sentence beginnings, as proportions of sentences
///   [26, 35) indices: ARI, Kincaid, FleschReadingEase, ColemanLiau,
///            GunningFogIndex, LIX, SMOGIndex, RIX, DaleChallIndex
[[nodiscard]] const FeatureNames &readability_feature_names();

namespace readability_slot {
inline constexpr std::size_t kCharacters = 0;
inline constexpr std::size_t kSyllables = 1;
inline constexpr std::size_t kWords = 2;
inline constexpr std::size_t kWordTypes = 3;
inline constexpr std::size_t kSentences = 4;
inline constexpr std::size_t kParagraphs = 5;
inline constexpr std::size_t kLongWords = 6;
inline constexpr std::size_t kComplexWords = 7;
inline constexpr std::size_t kComplexWordsDc = 8;
inline constexpr std::size_t kAri = 26;
inline constexpr std::size_t kKincaid = 27;
inline constexpr std::size_t kFleschReadingEase = 28;
inline constexpr std::size_t kColemanLiau = 29;
inline constexpr std::size_t kGunningFog = 30;
inline constexpr std::size_t kLix = 31;
inline constexpr std::size_t kSmog = 32;
inline constexpr std::size_t kRix = 33;
inline constexpr std::size_t kDaleChall = 34;
}  // namespace readability_slot

/// Surface counts feeding the readability indices; exposed for inspection.
struct ReadabilityCounts {
    std::size_t characters{0};  // letters and digits of word tokens
    std::size_t syllables{0};
    std::size_t words{0};
    std::size_t word_types{0};
    std::size_t sentences{0};
    std::size_t long_words{0};       // >= 7 characters
    std::size_t complex_words{0};    // >= 3 syllables
    std::size_t difficult_words{0};  // absent from the Dale-Chall familiar list
};

[[nodiscard]] ReadabilityCounts readability_counts(const AnnotatedText &annotated, const WordSet &familiar_words);

/// 35-slot readability block. `familiar_words` is the Dale-Chall list of
/// familiar words; words outside it are difficult. Throws ValidationError
/// when the text has no sentence or no word.
[[nodiscard]] FeatureBlock readability_features(const AnnotatedText &annotated, const WordSet &familiar_words);

/// Percentage of word tokens matching each lexicon category. Throws
/// ValidationError on an empty lexicon or a text without words.
[[nodiscard]] FeatureBlock lexicon_features(const AnnotatedText &annotated, const Lexicon &lexicon);

[[nodiscard]] FeatureNames lexicon_feature_names(const Lexicon &lexicon);

/// Slot layout of the lexical-richness block:
///   [0, 8)   counts: wordtypes, swordtypes, lextypes, slextypes,
///            wordtokens, swordtokens, lextokens, slextokens
///   8        ld (lexical density)
///   [9, 14)  sophistication: ls1, ls2, vs1, vs2, cvs1
///   [14, 18) ndw, ndwz, ndwerz, ndwesz (50-token variants)
///   [18, 24) ttr, msttr, cttr, rttr, logttr, uber
///   [24, 33) variation: lv, vv1, svv1, cvv1, vv2, nv, adjv, advv, modv
[[nodiscard]] const FeatureNames &lexrich_feature_names();

namespace lexrich_slot {
inline constexpr std::size_t kLexicalDensity = 8;
inline constexpr std::size_t kNdw = 14;
inline constexpr std::size_t kTtr = 18;
inline constexpr std::size_t kMsttr = 19;
inline constexpr std::size_t kLogTtr = 22;
inline constexpr std::size_t kUber = 23;
}  // namespace lexrich_slot

struct LexRichOptions {
    std::size_t sample_size{50};
    std::size_t sample_trials{10};
    std::uint64_t seed{20190418};
};

/// 33 lexical-richness measures. Needs POS tags on every token (throws
/// MissingModalityError otherwise). Zero denominators give 0 and a warning.
[[nodiscard]] FeatureBlock lexrich_features(const AnnotatedText &annotated, const RankedWordList &reference,
                                            const LexRichOptions &options = {});

}  // namespace misinfo

#endif  // MISINFO_LINGUISTIC_FEATURES_HPP
