#include "misinfo/error.hpp"
#include "misinfo/linguistic_features.hpp"
#include "misinfo/resources.hpp"
#include "support/test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace misinfo;
namespace slot = misinfo::readability_slot;

namespace {

WordSet familiar() { return load_word_set(testing::fixture_path("dale_chall_familiar.txt")); }

AnnotatedText tagged(const std::vector<std::pair<std::string, std::string>> &pairs) {
    std::string text;
    std::string pos;
    for (const auto &[word, tag] : pairs) {
        text += (text.empty() ? "" : " ") + word;
        pos += (pos.empty() ? "" : " ") + word + "_" + tag;
    }
    return annotate(text, std::vector<std::string>{pos});
}

}  // namespace

TEST_CASE("readability counts on the three-paragraph fixture") {
    const auto text = testing::read_text(testing::fixture_path("readability_3para.txt"));
    const auto c = readability_counts(annotate(text), familiar());
    CHECK(c.sentences == 8);
    CHECK(c.words == 46);
    CHECK(c.characters == 234);
    CHECK(c.syllables == 75);
    CHECK(c.long_words == 8);
    CHECK(c.complex_words == 6);
    CHECK(c.difficult_words == 13);
    CHECK(c.word_types == 40);
}

TEST_CASE("readability indices match hand computation from the counts") {
    const auto text = testing::read_text(testing::fixture_path("readability_3para.txt"));
    const auto block = readability_features(annotate(text), familiar());
    REQUIRE(block.dim == kReadabilityDim);
    const auto v = block.to_dense();

    // Hand counts: 234 letters, 46 words, 8 sentences, 75 syllables,
    // 8 long words, 6 complex words, 13 difficult words.
    const double wps = 46.0 / 8.0;
    const double cpw = 234.0 / 46.0;
    const double spw = 75.0 / 46.0;
    const double pct_difficult = 100.0 * 13.0 / 46.0;
    CHECK(std::abs(v[slot::kAri] - (4.71 * cpw + 0.5 * wps - 21.43)) < 1e-9);
    CHECK(std::abs(v[slot::kKincaid] - (0.39 * wps + 11.8 * spw - 15.59)) < 1e-9);
    CHECK(std::abs(v[slot::kFleschReadingEase] - (206.835 - 1.015 * wps - 84.6 * spw)) < 1e-9);
    CHECK(std::abs(v[slot::kColemanLiau] - (0.0588 * 100.0 * cpw - 0.296 * 100.0 * 8.0 / 46.0 - 15.8)) < 1e-9);
    CHECK(std::abs(v[slot::kGunningFog] - 0.4 * (wps + 100.0 * 6.0 / 46.0)) < 1e-9);
    CHECK(std::abs(v[slot::kLix] - (wps + 100.0 * 8.0 / 46.0)) < 1e-9);
    CHECK(std::abs(v[slot::kSmog] - (1.043 * std::sqrt(6.0 * 30.0 / 8.0) + 3.1291)) < 1e-9);
    CHECK(std::abs(v[slot::kRix] - 1.0) < 1e-9);
    CHECK(std::abs(v[slot::kDaleChall] - (0.1579 * pct_difficult + 0.0496 * wps + 3.6365)) < 1e-9);
    CHECK(v[slot::kParagraphs] == 1.0);
    CHECK(v[slot::kComplexWordsDc] == 13.0);
}

TEST_CASE("single short sentence") {
    const auto v = readability_features(annotate("The cat sat."), familiar()).to_dense();
    CHECK(v[slot::kFleschReadingEase] == doctest::Approx(119.19).epsilon(1e-12));
    CHECK(v[slot::kLix] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(v.size() == 35);
    CHECK_THROWS_AS((void)readability_features(annotate("..."), familiar()), ValidationError);
    CHECK_THROWS_AS((void)readability_features(annotate(""), familiar()), ValidationError);
}

TEST_CASE("lexicon percentages") {
    Lexicon lexicon;
    lexicon.add("pos", "good");
    lexicon.add("pos", "happ*");
    lexicon.add("neg", "sad");
    lexicon.add("none", "zzz");
    const auto v = lexicon_features(annotate("good happy sad happiness"), lexicon).to_dense();
    CHECK(v[0] == doctest::Approx(75.0));
    CHECK(v[1] == doctest::Approx(25.0));
    CHECK(v[2] == 0.0);
    CHECK_THROWS_AS((void)lexicon_features(annotate("good"), Lexicon{}), ValidationError);
    CHECK_THROWS_AS((void)lexicon_features(annotate("."), lexicon), ValidationError);
}

TEST_CASE("lexicon fixture has 73 categories and bounded percentages") {
    const auto lexicon = load_lexicon(testing::fixture_path("lexicon_73.tsv"));
    CHECK(lexicon.size() == 73);
    const auto text = testing::read_text(testing::fixture_path("readability_3para.txt"));
    const auto block = lexicon_features(annotate(text), lexicon);
    CHECK(block.dim == 73);
    for (const double value : block.to_dense()) {
        CHECK(value >= 0.0);
        CHECK(value <= 100.0);
    }
}

TEST_CASE("lexicon parsing rejects malformed lines") {
    CHECK_THROWS_AS((void)parse_lexicon("only_one_field\n"), ValidationError);
    CHECK_THROWS_AS((void)parse_lexicon("cat\t\n"), ValidationError);
    CHECK(parse_lexicon("# comment\n\na\tx\nb\ty*\na\tz\n").size() == 2);
}

TEST_CASE("lexical richness") {
    const auto wordlist = load_ranked_wordlist(testing::fixture_path("wordlist_ranked.txt"));
    const auto a = tagged({{"tests", "NNS"}, {"ran", "VBD"}, {"the", "DT"}, {"quick", "JJ"}});
    const auto block = lexrich_features(a, wordlist);
    REQUIRE(block.dim == kLexRichDim);
    CHECK(block.at(lexrich_slot::kLexicalDensity) == doctest::Approx(0.75));
    CHECK(block.at(lexrich_slot::kTtr) == doctest::Approx(1.0));
    CHECK(block.at(lexrich_slot::kNdw) == 4.0);
    CHECK_FALSE(block.warnings.empty());

    CHECK_THROWS_AS((void)lexrich_features(annotate("no tags here"), wordlist), MissingModalityError);
}

TEST_CASE("zero-verb text reports zero verb ratios with a warning") {
    const auto wordlist = load_ranked_wordlist(testing::fixture_path("wordlist_ranked.txt"));
    const auto block = lexrich_features(tagged({{"good", "JJ"}, {"news", "NN"}}), wordlist);
    CHECK(block.at(11) == 0.0);
    bool warned = false;
    for (const auto &w : block.warnings) {
        warned = warned || w.find("vs1") != std::string::npos;
    }
    CHECK(warned);
}

TEST_CASE("lexical richness ratios stay in range on planted documents") {
    const auto wordlist = load_ranked_wordlist(testing::fixture_path("wordlist_ranked.txt"));
    testing::PlantedCorpusOptions opts;
    opts.n_trustworthy = 4;
    opts.n_misinformative = 4;
    opts.with_pos = true;
    for (const auto &doc : testing::planted_docs(opts)) {
        const auto block = lexrich_features(annotate(doc.transcript, doc.pos_lines), wordlist);
        const auto v = block.to_dense();
        for (const std::size_t i : {8, 9, 10, 11, 18, 19, 24, 25, 28, 29, 30, 31, 32}) {
            CHECK(v[i] >= 0.0);
            CHECK(v[i] <= 1.0);
        }
        CHECK(std::isfinite(v[lexrich_slot::kLogTtr]));
        CHECK(std::isfinite(v[lexrich_slot::kUber]));
        CHECK(v == lexrich_features(annotate(doc.transcript, doc.pos_lines), wordlist).to_dense());
    }
}
