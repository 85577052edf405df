#include "misinfo/linguistic_features.hpp"

#include "misinfo/error.hpp"
#include "misinfo/rng.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numeric>
#include <set>
#include <string_view>

namespace misinfo {

namespace {

struct TaggedWord {
    std::string_view lower;
    std::string_view tag;
    bool lexical{false};
    bool sophisticated{false};
};

std::size_t type_count(std::span<const TaggedWord> words) {
    std::set<std::string_view> types;
    for (const auto &w : words) {
        types.insert(w.lower);
    }
    return types.size();
}

class Ratios {
  public:
    explicit Ratios(std::vector<std::string> &warnings) : warnings_(warnings) {}

    double operator()(const char *measure, double numerator, double denominator) {
        if (denominator == 0.0) {
            warnings_.push_back(fmt::format("lexrich: {} has a zero denominator, set to 0", measure));
            return 0.0;
        }
        return numerator / denominator;
    }

  private:
    std::vector<std::string> &warnings_;
};

}  // namespace

const FeatureNames &lexrich_feature_names() {
    static const FeatureNames names = std::make_shared<const std::vector<std::string>>(std::vector<std::string>{
        "wordtypes", "swordtypes", "lextypes", "slextypes", "wordtokens", "swordtokens", "lextokens", "slextokens",
        "ld",        "ls1",        "ls2",      "vs1",       "vs2",        "cvs1",        "ndw",       "ndwz",
        "ndwerz",    "ndwesz",     "ttr",      "msttr",     "cttr",       "rttr",        "logttr",    "uber",
        "lv",        "vv1",        "svv1",     "cvv1",      "vv2",        "nv",          "adjv",      "advv",
        "modv"});
    return names;
}

FeatureBlock lexrich_features(const AnnotatedText &annotated, const RankedWordList &reference,
                              const LexRichOptions &options) {
    if (!annotated.has_pos()) {
        throw MissingModalityError("lexical richness needs POS tags");
    }
    std::vector<TaggedWord> words;
    for (const auto &token : annotated.tokens) {
        if (!token.is_word()) {
            continue;
        }
        TaggedWord w;
        w.lower = token.lower;
        w.tag = *token.pos;
        w.lexical = pos_is_lexical(w.tag, w.lower);
        w.sophisticated = reference.is_sophisticated(w.lower);
        words.push_back(w);
    }

    std::vector<std::string> warnings;
    Ratios ratio(warnings);

    std::set<std::string_view> word_types, sword_types, lex_types, slex_types;
    std::set<std::string_view> verb_types, sverb_types, noun_types, adj_types, adv_types;
    std::size_t sword_tokens = 0, lex_tokens = 0, slex_tokens = 0, verb_tokens = 0;
    for (const auto &w : words) {
        word_types.insert(w.lower);
        if (w.sophisticated) {
            sword_types.insert(w.lower);
            ++sword_tokens;
        }
        if (!w.lexical) {
            continue;
        }
        ++lex_tokens;
        lex_types.insert(w.lower);
        if (w.sophisticated) {
            ++slex_tokens;
            slex_types.insert(w.lower);
        }
        if (is_verb_tag(w.tag)) {
            ++verb_tokens;
            verb_types.insert(w.lower);
            if (w.sophisticated) {
                sverb_types.insert(w.lower);
            }
        } else if (is_noun_tag(w.tag)) {
            noun_types.insert(w.lower);
        } else if (is_adjective_tag(w.tag)) {
            adj_types.insert(w.lower);
        } else if (is_adverb_tag(w.tag)) {
            adv_types.insert(w.lower);
        }
    }

    const auto n_tokens = static_cast<double>(words.size());
    const auto n_types = static_cast<double>(word_types.size());
    const auto n_lex = static_cast<double>(lex_tokens);
    const auto n_verbs = static_cast<double>(verb_tokens);
    const auto n_verb_types = static_cast<double>(verb_types.size());
    const auto n_sverb_types = static_cast<double>(sverb_types.size());

    std::vector<double> v;
    v.reserve(kLexRichDim);
    v.push_back(n_types);
    v.push_back(static_cast<double>(sword_types.size()));
    v.push_back(static_cast<double>(lex_types.size()));
    v.push_back(static_cast<double>(slex_types.size()));
    v.push_back(n_tokens);
    v.push_back(static_cast<double>(sword_tokens));
    v.push_back(n_lex);
    v.push_back(static_cast<double>(slex_tokens));

    v.push_back(ratio("ld", n_lex, n_tokens));

    v.push_back(ratio("ls1", static_cast<double>(slex_tokens), n_lex));
    v.push_back(ratio("ls2", static_cast<double>(sword_types.size()), n_types));
    v.push_back(ratio("vs1", n_sverb_types, n_verbs));
    v.push_back(ratio("vs2", n_sverb_types * n_sverb_types, n_verbs));
    v.push_back(ratio("cvs1", n_sverb_types, std::sqrt(2.0 * n_verbs)));

    // Number of different words, whole text and three 50-token variants.
    const auto sample = options.sample_size;
    v.push_back(n_types);
    if (words.size() < sample || sample == 0) {
        warnings.push_back(fmt::format("lexrich: fewer than {} tokens, sampled ndw variants equal ndw", sample));
        v.push_back(n_types);
        v.push_back(n_types);
        v.push_back(n_types);
    } else {
        v.push_back(static_cast<double>(type_count(std::span(words).first(sample))));
        Rng rng(options.seed);
        std::vector<std::size_t> order(words.size());
        double random_sum = 0.0;
        double sequence_sum = 0.0;
        for (std::size_t trial = 0; trial < options.sample_trials; ++trial) {
            std::iota(order.begin(), order.end(), std::size_t{0});
            shuffle_in_place(std::span(order), rng);
            std::vector<TaggedWord> picked;
            picked.reserve(sample);
            for (std::size_t k = 0; k < sample; ++k) {
                picked.push_back(words[order[k]]);
            }
            random_sum += static_cast<double>(type_count(picked));
            const auto start = static_cast<std::size_t>(uniform_below(rng, words.size() - sample + 1));
            sequence_sum += static_cast<double>(type_count(std::span(words).subspan(start, sample)));
        }
        const auto trials = static_cast<double>(std::max<std::size_t>(options.sample_trials, 1));
        v.push_back(random_sum / trials);
        v.push_back(sequence_sum / trials);
    }

    // Type-token family.
    const double ttr = ratio("ttr", n_types, n_tokens);
    v.push_back(ttr);
    const auto segments = sample == 0 ? 0 : words.size() / sample;
    if (segments == 0) {
        warnings.push_back("lexrich: no full segment for msttr, using ttr");
        v.push_back(ttr);
    } else {
        double sum = 0.0;
        for (std::size_t s = 0; s < segments; ++s) {
            sum += static_cast<double>(type_count(std::span(words).subspan(s * sample, sample))) /
                   static_cast<double>(sample);
        }
        v.push_back(sum / static_cast<double>(segments));
    }
    v.push_back(ratio("cttr", n_types, std::sqrt(2.0 * n_tokens)));
    v.push_back(ratio("rttr", n_types, std::sqrt(n_tokens)));
    const double log_tokens = n_tokens > 0.0 ? std::log(n_tokens) : 0.0;
    const double log_types = n_types > 0.0 ? std::log(n_types) : 0.0;
    v.push_back(ratio("logttr", log_types, log_tokens));
    v.push_back(ratio("uber", log_tokens * log_tokens, log_tokens - log_types));

    // Variation family.
    v.push_back(ratio("lv", static_cast<double>(lex_types.size()), n_lex));
    v.push_back(ratio("vv1", n_verb_types, n_verbs));
    v.push_back(ratio("svv1", n_verb_types * n_verb_types, n_verbs));
    v.push_back(ratio("cvv1", n_verb_types, std::sqrt(2.0 * n_verbs)));
    v.push_back(ratio("vv2", n_verb_types, n_lex));
    v.push_back(ratio("nv", static_cast<double>(noun_types.size()), n_lex));
    v.push_back(ratio("adjv", static_cast<double>(adj_types.size()), n_lex));
    v.push_back(ratio("advv", static_cast<double>(adv_types.size()), n_lex));
    v.push_back(ratio("modv", static_cast<double>(adj_types.size() + adv_types.size()), n_lex));

    auto block = make_dense_block(BlockKind::LexRich, lexrich_feature_names(), std::move(v));
    block.warnings = std::move(warnings);
    return block;
}

}  // namespace misinfo
