#include "misinfo/corpus.hpp"
#include "misinfo/error.hpp"
#include "support/test_support.hpp"

#include <doctest.h>
#include <fmt/format.h>

#include <algorithm>

using namespace misinfo;
using misinfo::testing::TempDir;
using misinfo::testing::write_text;

namespace {

std::string line(std::string_view id, int score, std::string_view transcript = "t.txt") {
    return fmt::format(R"({{"id":"{}","transcript_path":"{}","score":{},"views":100,"publish_date":"2018-01-01",)"
                       R"("query_date":"2019-04-18","thumbs_up":5,"thumbs_down":1,"duration_s":120.5,"category_id":27}})",
                       id, transcript, score);
}

}  // namespace

TEST_CASE("binarize_label: score 1 is trustworthy, 2 to 5 misinformative") {
    CHECK(binarize_label(1) == Label::Trustworthy);
    CHECK(binarize_label(2) == Label::Misinformative);
    CHECK(binarize_label(5) == Label::Misinformative);
    CHECK_THROWS_AS((void)binarize_label(0), ValidationError);
    CHECK_THROWS_AS((void)binarize_label(6), ValidationError);
}

TEST_CASE("ISO dates parse with and without a time part") {
    const auto d = parse_iso_date("2019-04-18");
    CHECK(format_iso_date(d) == "2019-04-18");
    CHECK(parse_iso_date("2019-04-18T12:00:00Z") == d);
    CHECK_THROWS_AS((void)parse_iso_date("2019-02-30"), ValidationError);
    CHECK_THROWS_AS((void)parse_iso_date("18/04/2019"), ValidationError);
}

TEST_CASE("category registry holds 32 codes") {
    CHECK(kCategoryRegistry.size() == 32);
    CHECK(is_registered_category(27));
    CHECK_FALSE(is_registered_category(3));
    CHECK(std::is_sorted(kCategoryRegistry.begin(), kCategoryRegistry.end()));
}

TEST_CASE("load_manifest: two valid lines give two records with derived labels") {
    TempDir dir;
    write_text(dir / "t.txt", "Some words here.");
    write_text(dir / "m.jsonl", line("v1", 1) + "\n" + line("v2", 3) + "\n");
    const auto records = load_manifest(dir / "m.jsonl");
    REQUIRE(records.size() == 2);
    CHECK(records[0].id == "v1");
    CHECK(records[0].label == Label::Trustworthy);
    CHECK(records[1].label == Label::Misinformative);
    CHECK(records[0].transcript == "Some words here.");
    CHECK_FALSE(records[0].engagement.comment_count.has_value());
    CHECK(records[0].engagement.duration_s == doctest::Approx(120.5));
}

TEST_CASE("load_manifest: score 7 is reported with its line number") {
    TempDir dir;
    write_text(dir / "t.txt", "Words.");
    write_text(dir / "m.jsonl", line("v1", 1) + "\n" + line("v2", 7) + "\n");
    const auto result = read_manifest(dir / "m.jsonl");
    REQUIRE(result.issues.size() == 1);
    CHECK(result.issues[0].message == "score out of range at line 2");
    CHECK(result.records.size() == 1);
    try {
        (void)load_manifest(dir / "m.jsonl");
        FAIL("expected ManifestError");
    } catch (const ManifestError &e) {
        CHECK(std::string(e.what()).find("score out of range at line 2") != std::string::npos);
    }
}

TEST_CASE("load_manifest: duplicate id is listed") {
    TempDir dir;
    write_text(dir / "t.txt", "Words.");
    write_text(dir / "m.jsonl", line("v1", 1) + "\n" + line("v1", 2) + "\n");
    const auto result = read_manifest(dir / "m.jsonl");
    REQUIRE(result.issues.size() == 1);
    CHECK(result.issues[0].message.find("'v1'") != std::string::npos);
}

TEST_CASE("load_manifest: missing fields, bad json and empty files") {
    TempDir dir;
    write_text(dir / "t.txt", "Words.");
    write_text(dir / "missing.jsonl", R"({"id":"v1","transcript_path":"t.txt","score":1})" "\n");
    const auto missing = read_manifest(dir / "missing.jsonl");
    CHECK(missing.records.empty());
    CHECK(std::any_of(missing.issues.begin(), missing.issues.end(),
                      [](const ManifestIssue &i) { return i.message == "missing required field 'views' at line 1"; }));

    write_text(dir / "bad.jsonl", "{not json\n");
    const auto bad = read_manifest(dir / "bad.jsonl");
    REQUIRE(bad.issues.size() == 1);
    CHECK(bad.issues[0].line == 1);

    write_text(dir / "empty.jsonl", "\n\n");
    const auto empty = read_manifest(dir / "empty.jsonl");
    REQUIRE(empty.issues.size() == 1);
    CHECK(empty.issues[0].message == "empty manifest");

    write_text(dir / "blank.txt", "   \n");
    write_text(dir / "blank.jsonl", line("v1", 1, "blank.txt") + "\n");
    CHECK_THROWS_AS((void)load_manifest(dir / "blank.jsonl"), ManifestError);
}

TEST_CASE("load_manifest: query date before publish date and unknown category are rejected") {
    TempDir dir;
    write_text(dir / "t.txt", "Words.");
    auto early = line("v1", 1);
    early.replace(early.find("2019-04-18"), 10, "2017-01-01");
    auto category = line("v2", 1);
    category.replace(category.find("\"category_id\":27"), 16, "\"category_id\":3");
    write_text(dir / "m.jsonl", early + "\n" + category + "\n");
    const auto result = read_manifest(dir / "m.jsonl");
    CHECK(result.records.empty());
    CHECK(result.issues.size() == 2);
}

TEST_CASE("load_manifest is deterministic and trustworthy count equals score-1 count") {
    TempDir dir;
    const auto manifest = misinfo::testing::write_planted_corpus(dir.path(), {.n_trustworthy = 12, .n_misinformative = 9});
    const auto a = load_manifest(manifest);
    const auto b = load_manifest(manifest);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].id == b[i].id);
        CHECK(a[i].transcript == b[i].transcript);
        CHECK(a[i].engagement == b[i].engagement);
    }
    const auto trust = std::count_if(a.begin(), a.end(), [](const VideoRecord &r) { return r.label == Label::Trustworthy; });
    const auto ones = std::count_if(a.begin(), a.end(), [](const VideoRecord &r) { return r.score == 1; });
    CHECK(trust == ones);
    CHECK(trust == 12);
}

TEST_CASE("corpus_stats: counts and means") {
    auto make = [](std::string id, int score, std::string text, double duration) {
        VideoRecord r;
        r.id = std::move(id);
        r.score = score;
        r.label = binarize_label(score);
        r.transcript = std::move(text);
        r.engagement.duration_s = duration;
        return r;
    };
    std::string hundred;
    for (int i = 0; i < 100; ++i) {
        hundred += "word ";
    }
    const auto one = corpus_stats({make("a", 1, hundred, 10.0)});
    CHECK(one.n_records == 1);
    CHECK(one.mean_words_per_transcript == doctest::Approx(100.0));
    CHECK_FALSE(one.mean_duration_misinformative.has_value());

    const auto two = corpus_stats({make("a", 1, "one two three four five six seven eight nine ten", 100.0),
                                   make("b", 2, "a b c d e f g h i j k l m n o p q r s t", 300.0)});
    CHECK(two.mean_words_per_transcript == doctest::Approx(15.0));
    CHECK(two.total_words == 30);
    CHECK(*two.mean_duration_trustworthy == doctest::Approx(100.0));
    CHECK(*two.mean_duration_misinformative == doctest::Approx(300.0));

    std::vector<VideoRecord> big;
    for (int i = 0; i < 250; ++i) {
        big.push_back(make(std::to_string(i), i < 132 ? 1 : 4, "x", 1.0));
    }
    const auto stats = corpus_stats(big);
    CHECK(stats.n_records == 250);
    CHECK(stats.n_trustworthy == 132);
    CHECK(stats.n_misinformative == 118);
    CHECK_THROWS_AS((void)corpus_stats({}), ValidationError);
}

TEST_CASE("count_words ignores punctuation-only chunks") {
    CHECK(count_words("Hello , world !") == 2);
    CHECK(count_words("  ") == 0);
    CHECK(count_words("it's 42 -- ok") == 3);
}
