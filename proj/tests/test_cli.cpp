#include "cli.hpp"
#include "misinfo/metadata_client.hpp"
#include "support/test_support.hpp"

#include <doctest.h>

#include <nlohmann/json.hpp>

#include <sstream>

using namespace misinfo;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "misinfo");
    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::size_t line_count(const std::string &text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

std::string strip_comments(const std::string &table) {
    std::istringstream in(table);
    std::string line;
    std::string out;
    while (std::getline(in, line)) {
        if (!line.starts_with("#")) {
            out += line + "\n";
        }
    }
    return out;
}

}  // namespace

TEST_CASE("ingest accepts a valid manifest and rejects a broken one") {
    testing::TempDir dir;
    const auto manifest = testing::write_planted_corpus(dir.path(), testing::PlantedCorpusOptions{});
    const auto ok = invoke({"--manifest", manifest.string(), "ingest"});
    CHECK(ok.code == cli::kExitOk);
    CHECK(ok.out.find("60") != std::string::npos);

    auto text = testing::read_text(manifest);
    const auto pos = text.find("\"score\":");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 9, "\"score\":7");
    testing::write_text(dir / "broken.jsonl", text);
    const auto bad = invoke({"--manifest", (dir / "broken.jsonl").string(), "ingest"});
    CHECK(bad.code == cli::kExitValidation);
    CHECK(bad.err.find("invalid: line 1: score") != std::string::npos);
}

TEST_CASE("usage errors exit with the validation code") {
    testing::TempDir dir;
    const auto manifest = testing::write_planted_corpus(dir.path(), testing::PlantedCorpusOptions{});
    CHECK(invoke({"--manifest", manifest.string(), "--blocks", "bogus", "evaluate"}).code == cli::kExitValidation);
    CHECK(invoke({"--manifest", (dir / "absent.jsonl").string(), "ingest"}).code == cli::kExitValidation);
    CHECK(invoke({"--manifest", manifest.string(), "--blocks", "lexicon", "--out", (dir / "o").string(), "extract"})
              .code == cli::kExitValidation);
    CHECK(invoke({"--no-such-flag"}).code == cli::kExitValidation);
    CHECK(invoke({"--help"}).code == cli::kExitOk);
}

TEST_CASE("extract writes blocks and reuses the cache") {
    testing::TempDir dir;
    const auto manifest = testing::write_planted_corpus(dir.path(), testing::PlantedCorpusOptions{});
    const auto out = dir / "out";
    const std::vector<std::string> args{"--manifest", manifest.string(), "--blocks", "readability", "--dale-chall",
                                        testing::fixture_path("dale_chall_familiar.txt").string(),
                                        "--out",      out.string(),     "extract"};
    const auto first = invoke(args);
    REQUIRE(first.code == cli::kExitOk);
    const auto names = nlohmann::json::parse(testing::read_text(out / "feature_names.json"));
    CHECK(names["feature_names"]["readability"].size() == 35);
    CHECK(names["dim"] == 35);
    CHECK_FALSE(fs::is_empty(out / "features"));
    CHECK(testing::read_text(out / "extract_log.txt").find("cache hits: 0/60") != std::string::npos);

    const auto second = invoke(args);
    REQUIRE(second.code == cli::kExitOk);
    CHECK(testing::read_text(out / "extract_log.txt").find("cache hits: 60/60") != std::string::npos);
}

TEST_CASE("extract reports records without audio") {
    testing::TempDir dir;
    testing::PlantedCorpusOptions opts;
    opts.n_trustworthy = 5;
    opts.n_misinformative = 5;
    const auto manifest = testing::write_planted_corpus(dir.path(), opts);
    const auto out = dir / "out";
    const auto result =
        invoke({"--manifest", manifest.string(), "--blocks", "acoustic", "--out", out.string(), "extract"});
    CHECK(result.code == cli::kExitValidation);
    const auto report = testing::read_text(out / "skip_report.tsv");
    CHECK(line_count(strip_comments(report)) == 11);
    CHECK(report.find("acoustic") != std::string::npos);
}

TEST_CASE("evaluate, train and report") {
    testing::TempDir dir;
    const auto manifest = testing::write_planted_corpus(dir.path(), testing::PlantedCorpusOptions{});
    const auto out = dir / "out";
    const auto eval = invoke({"--manifest", manifest.string(), "--out", out.string(), "evaluate"});
    REQUIRE(eval.code == cli::kExitOk);
    const auto table = testing::read_text(out / "evaluate.tsv");
    CHECK(table.find("# manifest_sha256") != std::string::npos);
    CHECK(table.find("# seed") != std::string::npos);
    CHECK(line_count(strip_comments(table)) == 3);

    const auto shown = invoke({"report", "--input", (out / "evaluate.json").string()});
    CHECK(shown.code == cli::kExitOk);
    CHECK(shown.out == table);
    const auto pooled = invoke({"report", "--input", (out / "evaluate.json").string(), "--pooled"});
    CHECK(pooled.code == cli::kExitOk);
    CHECK(pooled.out.find("# aggregation: pooled") != std::string::npos);
    CHECK(invoke({"report", "--input", manifest.string()}).code == cli::kExitValidation);

    REQUIRE(invoke({"--manifest", manifest.string(), "--out", out.string(), "train"}).code == cli::kExitOk);
    const auto model = nlohmann::json::parse(testing::read_text(out / "model.json"));
    CHECK(model.contains("block_config"));
}

TEST_CASE("ablation tables are byte-identical across runs and thread counts") {
    testing::TempDir dir;
    testing::PlantedCorpusOptions opts;
    opts.with_pos = true;
    opts.with_trees = true;
    const auto manifest = testing::write_planted_corpus(dir.path(), opts);
    const auto run = [&](const std::string &name, const std::string &jobs) {
        const auto out = dir / name;
        const auto r = invoke({"--manifest", manifest.string(), "--blocks", "engagement,ngrams,syntax", "--jobs", jobs,
                               "--out", out.string(), "ablate"});
        REQUIRE(r.code == cli::kExitOk);
        return testing::read_text(out / "ablation.tsv");
    };
    const auto a = run("a", "1");
    const auto b = run("b", "1");
    const auto c = run("c", "3");
    CHECK(a == b);
    CHECK(a == c);
    // baseline + engagement, ngrams, syntax
    CHECK(line_count(strip_comments(a)) == 5);
}

TEST_CASE("fetch-metadata replays the cache offline") {
    testing::TempDir dir;
    const std::string raw =
        R"({"items":[{"snippet":{"publishedAt":"2018-03-01T00:00:00Z","categoryId":"27"},)"
        R"("statistics":{"viewCount":"1000","likeCount":"5"},"contentDetails":{"duration":"PT1M"}}]})";
    MetadataCache(dir / "cache").store("abc", parse_iso_date("2018-03-11"), raw);
    const auto out = dir / "out";
    const auto r = invoke({"--offline", "--out", out.string(), "fetch-metadata", "--ids", "abc,missing",
                           "--metadata-cache", (dir / "cache").string()});
    CHECK(r.code == cli::kExitRuntime);
    CHECK(r.err.find("missing") != std::string::npos);
    const auto line = nlohmann::json::parse(testing::read_text(out / "metadata.jsonl"));
    CHECK(line["views"] == 1000);
    CHECK(line["query_date"] == "2018-03-11");
    CHECK_FALSE(line.contains("comment_count"));
}
