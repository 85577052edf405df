#include "cli.hpp"

#include "misinfo/classifier.hpp"
#include "misinfo/error.hpp"
#include "misinfo/hash.hpp"
#include "misinfo/metadata_client.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>

namespace misinfo::cli {

namespace fs = std::filesystem;

namespace {

// Bumped whenever an extractor changes its output for the same input.
constexpr int kExtractorVersion = 1;

void write_file(const fs::path &path, std::string_view content) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(fmt::format("cannot write '{}'", path.string()));
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

std::string read_file(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(fmt::format("cannot read '{}'", path.string()));
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string safe_file_stem(std::string_view id) {
    std::string out(id);
    for (auto &c : out) {
        const auto u = static_cast<unsigned char>(c);
        if (std::isalnum(u) == 0 && c != '-' && c != '_' && c != '.') {
            c = '_';
        }
    }
    return out;
}

nlohmann::json optional_path(const std::optional<fs::path> &p) {
    return p ? nlohmann::json(p->string()) : nlohmann::json();
}

/// Shared provenance block embedded in every artifact.
struct RunContext {
    RunConfig config;
    std::string input_hash;

    [[nodiscard]] nlohmann::json json() const {
        return {{"config", config.to_json()}, {"manifest_sha256", input_hash}};
    }

    [[nodiscard]] std::vector<std::string> header_lines(std::string_view kind) const;
};

std::vector<std::string> report_header(std::string_view artifact, const nlohmann::json &run, Aggregation aggregation) {
    const auto &config = run.at("config");
    return {fmt::format("artifact: {}", artifact), fmt::format("config: {}", config.dump()),
            fmt::format("manifest_sha256: {}", run.at("manifest_sha256").get<std::string>()),
            fmt::format("seed: {}", config.at("seed").get<std::uint64_t>()),
            aggregation == Aggregation::Macro
                ? "aggregation: macro mean over folds (pooled metrics in the json detail file)"
                : "aggregation: pooled confusion over folds"};
}

std::vector<std::string> RunContext::header_lines(std::string_view kind) const {
    return report_header(kind, json(), Aggregation::Macro);
}

RunContext make_context(const RunConfig &config) {
    config.validate();
    return {config, sha256_file(config.manifest)};
}

class HitLog {
  public:
    void add(std::string line) {
        std::lock_guard lock(mutex_);
        lines_.push_back(std::move(line));
    }
    [[nodiscard]] std::vector<std::string> sorted() const {
        std::lock_guard lock(mutex_);
        auto out = lines_;
        std::sort(out.begin(), out.end());
        return out;
    }

  private:
    mutable std::mutex mutex_;
    std::vector<std::string> lines_;
};

class LoggingCache : public BlockCache {
  public:
    LoggingCache(DiskBlockCache &inner, HitLog &log) : inner_(inner), log_(log) {}

    std::optional<FeatureBlock> load(const VideoRecord &record, BlockKind kind) override {
        auto hit = inner_.load(record, kind);
        log_.add(fmt::format("{}\t{}\t{}", record.id, block_name(kind), hit ? "cache-hit" : "computed"));
        return hit;
    }
    void store(const VideoRecord &record, BlockKind kind, const FeatureBlock &block) override {
        inner_.store(record, kind, block);
    }

  private:
    DiskBlockCache &inner_;
    HitLog &log_;
};

nlohmann::json vocab_to_json(const SparseVocab &vocab) {
    std::vector<std::uint64_t> df;
    std::vector<std::uint64_t> tf;
    for (std::uint32_t i = 0; i < vocab.size(); ++i) {
        df.push_back(vocab.doc_freq(i));
        tf.push_back(vocab.total_freq(i));
    }
    return {{"terms", vocab.size() == 0 ? std::vector<std::string>{} : vocab.terms()},
            {"doc_freq", df},
            {"total_freq", tf},
            {"n_docs", vocab.n_docs()},
            {"min_total_freq", vocab.min_total_freq()}};
}

std::vector<std::size_t> all_indices(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), std::size_t{0});
    return v;
}

std::string skip_table(const std::vector<SkipEntry> &skips, const RunContext &ctx) {
    std::string out;
    for (const auto &line : ctx.header_lines("skip_report")) {
        out += fmt::format("# {}\n", line);
    }
    out += "id\tblock\treason\n";
    for (const auto &s : skips) {
        out += fmt::format("{}\t{}\t{}\n", s.id, block_name(s.block), s.reason);
    }
    return out;
}

struct Prepared {
    std::vector<VideoRecord> records;
    PreparedCorpus corpus;
    std::vector<std::string> cache_log;
    std::size_t hits{0};
    std::size_t lookups{0};
};

Prepared prepare(const RunConfig &config, std::span<const BlockKind> blocks) {
    Prepared p;
    p.records = load_manifest(config.manifest);
    const auto resources = load_resources(config);
    resources.require(blocks);
    DiskBlockCache disk(config.effective_cache_dir(), resources, config);
    HitLog log;
    LoggingCache cache(disk, log);
    p.corpus = prepare_corpus(p.records, blocks, resources, config.jobs, &cache);
    p.cache_log = log.sorted();
    p.hits = disk.hits();
    p.lookups = disk.hits() + disk.misses();
    return p;
}

int cmd_ingest(const RunConfig &config, std::ostream &out, std::ostream &err) {
    if (!fs::exists(config.manifest)) {
        err << fmt::format("error: manifest '{}' does not exist\n", config.manifest.string());
        return kExitValidation;
    }
    const auto result = read_manifest(config.manifest);
    for (const auto &issue : result.issues) {
        err << fmt::format("invalid: line {}: {}: {}\n", issue.line, issue.field.empty() ? "-" : issue.field,
                           issue.message);
    }
    if (!result.issues.empty()) {
        err << fmt::format("{} issue(s) in '{}'\n", result.issues.size(), config.manifest.string());
        return kExitValidation;
    }
    const auto stats = corpus_stats(result.records);
    const auto opt = [](const std::optional<double> &v) { return v ? fmt::format("{:.2f}", *v) : std::string("n/a"); };
    out << fmt::format("records\t{}\n", stats.n_records);
    out << fmt::format("trustworthy\t{}\n", stats.n_trustworthy);
    out << fmt::format("misinformative\t{}\n", stats.n_misinformative);
    out << fmt::format("mean_duration_trustworthy_s\t{}\n", opt(stats.mean_duration_trustworthy));
    out << fmt::format("mean_duration_misinformative_s\t{}\n", opt(stats.mean_duration_misinformative));
    out << fmt::format("total_words\t{}\n", stats.total_words);
    out << fmt::format("mean_words_per_transcript\t{:.2f}\n", stats.mean_words_per_transcript);
    return kExitOk;
}

int cmd_extract(const RunConfig &config, std::ostream &out, std::ostream &err) {
    const auto ctx = make_context(config);
    auto p = prepare(config, config.blocks);
    const auto usable_all = p.corpus.usable(all_indices(p.corpus.records.size()), std::vector<BlockKind>{});
    const auto context = fit_fold_context(p.corpus, usable_all, config.blocks, config.min_freq);
    const auto resources = load_resources(config);

    nlohmann::json names = nlohmann::json::object();
    std::size_t total_dim = 0;
    for (const auto kind : config.blocks) {
        FeatureNames block_names;
        if (kind == BlockKind::Ngrams) {
            block_names = context.ngrams->names();
        } else if (kind == BlockKind::Syntax) {
            block_names = context.syntax->names();
        } else {
            block_names = fixed_block_names(kind, resources);
        }
        const auto list = block_names ? *block_names : std::vector<std::string>{};
        total_dim += list.size();
        names[std::string(block_name(kind))] = list;
    }
    nlohmann::json manifest = {{"run", ctx.json()},
                               {"block_order", format_block_list(config.blocks)},
                               {"dim", total_dim},
                               {"feature_names", names}};
    write_file(config.out / "feature_names.json", manifest.dump(2) + "\n");

    for (const auto &record : p.corpus.records) {
        nlohmann::json blocks = nlohmann::json::object();
        for (const auto kind : config.blocks) {
            if (!record.has(kind)) {
                continue;
            }
            if (kind == BlockKind::Ngrams) {
                blocks["ngrams"] = block_to_json(tfidf_vector(*record.ngram_terms, *context.ngrams, kind));
            } else if (kind == BlockKind::Syntax) {
                blocks["syntax"] = block_to_json(tfidf_vector(*record.syntax_terms, *context.syntax, kind));
            } else {
                blocks[std::string(block_name(kind))] = block_to_json(record.blocks.at(kind));
            }
        }
        nlohmann::json doc = {{"id", record.id},
                              {"label", to_string(record.label)},
                              {"blocks", blocks},
                              {"config_sha256", sha256_hex(ctx.json().dump())}};
        write_file(config.out / "features" / (safe_file_stem(record.id) + ".json"), doc.dump() + "\n");
    }

    const auto skips = p.corpus.skip_report(config.blocks);
    write_file(config.out / "skip_report.tsv", skip_table(skips, ctx));
    std::string log;
    for (const auto &line : p.cache_log) {
        log += line + "\n";
    }
    log += fmt::format("cache hits: {}/{}\n", p.hits, p.lookups);
    write_file(config.out / "extract_log.txt", log);

    out << fmt::format("extracted {} record(s), {} feature(s) over blocks {}\n", p.corpus.records.size(), total_dim,
                       format_block_list(config.blocks));
    out << fmt::format("cache hits: {}/{}\n", p.hits, p.lookups);
    if (!skips.empty()) {
        for (const auto &s : skips) {
            err << fmt::format("skipped: {} [{}]: {}\n", s.id, block_name(s.block), s.reason);
        }
        err << fmt::format("{} extraction failure(s); see {}\n", skips.size(),
                           (config.out / "skip_report.tsv").string());
        return kExitValidation;
    }
    return kExitOk;
}

int cmd_train(const RunConfig &config, std::ostream &out, std::ostream &) {
    const auto ctx = make_context(config);
    auto p = prepare(config, config.blocks);
    const auto usable = p.corpus.usable(all_indices(p.corpus.records.size()), config.blocks);
    if (usable.empty()) {
        throw ValidationError("no record has every enabled block");
    }
    const auto context = fit_fold_context(p.corpus, usable, config.blocks, config.min_freq);
    auto x = assemble(p.corpus, usable, config.blocks, context);
    nlohmann::json block_config = {{"run", ctx.json()}, {"blocks", format_block_list(config.blocks)}};
    if (config.per_column_norm) {
        const auto scales = column_l2_scales(x);
        x.scale_columns(scales);
        block_config["column_scales"] = scales;
    }
    if (context.ngrams) {
        block_config["ngrams_vocab"] = vocab_to_json(*context.ngrams);
    }
    if (context.syntax) {
        block_config["syntax_vocab"] = vocab_to_json(*context.syntax);
    }
    std::vector<Label> y;
    for (const auto i : usable) {
        y.push_back(p.corpus.records[i].label);
    }
    auto model = train_linear_svm(x, y, {config.c_param, config.seed, config.tol, config.max_epochs});
    model.block_config = std::move(block_config);
    save_model(model, config.out / "model.json");
    const auto &d = model.diagnostics;
    out << fmt::format("trained on {} record(s), {} feature(s)\n", usable.size(), x.n_cols());
    out << fmt::format("epochs {} converged {} primal {:.6g} duality_gap {:.3g}\n", d.epochs_run, d.converged,
                       d.primal_objective, d.duality_gap);
    out << fmt::format("model written to {}\n", (config.out / "model.json").string());
    return kExitOk;
}

EvalOptions eval_options(const RunConfig &config) {
    EvalOptions options;
    options.svm = {config.c_param, config.seed, config.tol, config.max_epochs};
    options.min_total_freq = config.min_freq;
    options.per_column_norm = config.per_column_norm;
    options.jobs = config.jobs;
    return options;
}

void write_reports(const RunContext &ctx, std::string_view stem, const std::vector<EvalReport> &reports,
                   const FoldPlan &plan, std::ostream &out) {
    const auto table = format_report_table(reports, ctx.header_lines(stem));
    write_file(ctx.config.out / fmt::format("{}.tsv", stem), table);
    nlohmann::json detail = {{"artifact", stem}, {"run", ctx.json()}, {"fold_plan", plan_to_json(plan)}};
    detail["reports"] = nlohmann::json::array();
    for (const auto &r : reports) {
        detail["reports"].push_back(report_to_json(r));
    }
    write_file(ctx.config.out / fmt::format("{}.json", stem), detail.dump(2) + "\n");
    out << table;
}

int cmd_evaluate(const RunConfig &config, std::ostream &out, std::ostream &) {
    const auto ctx = make_context(config);
    auto p = prepare(config, config.blocks);
    const auto plan = stratified_kfold(p.corpus.ids(), p.corpus.labels(), config.k, config.seed);
    std::vector<EvalReport> reports{majority_baseline(p.corpus.labels(), plan),
                                    evaluate_cv(p.corpus, config.blocks, plan, eval_options(config))};
    write_reports(ctx, "evaluate", reports, plan, out);
    return kExitOk;
}

int cmd_ablate(const RunConfig &config, bool blocks_given, std::ostream &out, std::ostream &) {
    const auto ctx = make_context(config);
    std::vector<AblationConfig> configs;
    if (!config.configs.empty()) {
        configs = parse_ablation_configs(config.configs);
    } else {
        for (auto &c : default_ablation_configs()) {
            const bool allowed = !blocks_given || std::all_of(c.blocks.begin(), c.blocks.end(), [&](BlockKind k) {
                return std::find(config.blocks.begin(), config.blocks.end(), k) != config.blocks.end();
            });
            if (allowed) {
                configs.push_back(std::move(c));
            }
        }
        if (configs.empty()) {
            throw ValidationError("no default ablation row uses only the selected blocks");
        }
    }
    std::vector<BlockKind> union_blocks;
    for (const auto &c : configs) {
        union_blocks.insert(union_blocks.end(), c.blocks.begin(), c.blocks.end());
    }
    union_blocks = canonical_blocks(union_blocks);
    auto p = prepare(config, union_blocks);
    const auto plan = stratified_kfold(p.corpus.ids(), p.corpus.labels(), config.k, config.seed);
    std::vector<EvalReport> reports{majority_baseline(p.corpus.labels(), plan)};
    for (auto &r : ablation_suite(p.corpus, configs, plan, eval_options(config))) {
        reports.push_back(std::move(r));
    }
    write_reports(ctx, "ablation", reports, plan, out);
    return kExitOk;
}

int cmd_report(const fs::path &input, bool pooled, std::ostream &out) {
    const auto detail = nlohmann::json::parse(read_file(input), nullptr, false);
    if (detail.is_discarded() || !detail.contains("reports")) {
        throw ValidationError(fmt::format("'{}' is not a report detail file", input.string()));
    }
    try {
        const auto aggregation = pooled ? Aggregation::Pooled : Aggregation::Macro;
        std::vector<EvalReport> reports;
        for (const auto &r : detail.at("reports")) {
            reports.push_back(report_from_json(r));
        }
        out << format_report_table(
            reports, report_header(detail.value("artifact", std::string("report")), detail.at("run"), aggregation),
            aggregation);
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(fmt::format("'{}' is malformed: {}", input.string(), e.what()));
    }
    return kExitOk;
}

struct FetchArgs {
    std::string ids;
    std::string api_key;
    std::string date;
    std::string metadata_cache;
};

int cmd_fetch(const RunConfig &config, const FetchArgs &args, std::ostream &out, std::ostream &err) {
    std::vector<std::string> ids;
    if (!args.ids.empty()) {
        std::stringstream stream(args.ids);
        std::string id;
        while (std::getline(stream, id, ',')) {
            if (!id.empty()) {
                ids.push_back(id);
            }
        }
    } else if (!config.manifest.empty()) {
        for (const auto &r : load_manifest(config.manifest)) {
            ids.push_back(r.id);
        }
    }
    if (ids.empty()) {
        throw ValidationError("fetch-metadata needs --ids or --manifest");
    }
    Date today{};
    if (args.date.empty()) {
        today = std::chrono::year_month_day{std::chrono::floor<std::chrono::days>(std::chrono::system_clock::now())};
    } else {
        today = parse_iso_date(args.date);
    }
    MetadataClientOptions options;
    options.api_key = args.api_key;
    if (options.api_key.empty()) {
        if (const char *env = std::getenv("MISINFO_API_KEY")) {
            options.api_key = env;
        }
    }
    options.cache_dir = args.metadata_cache.empty() ? config.out / "metadata_cache" : fs::path(args.metadata_cache);
    options.offline = config.offline;
    MetadataClient client(options, config.offline ? nullptr : make_https_transport());

    std::string lines;
    int status = kExitOk;
    for (const auto &id : ids) {
        try {
            const auto meta = client.fetch(id, today);
            nlohmann::json j = {{"id", id},
                                {"views", meta.view_count},
                                {"publish_date", format_iso_date(meta.publish_date)},
                                {"query_date", format_iso_date(meta.query_date)},
                                {"thumbs_up", meta.thumbs_up},
                                {"thumbs_down", meta.thumbs_down},
                                {"duration_s", meta.duration_s},
                                {"category_id", meta.category_id}};
            if (meta.comment_count) {
                j["comment_count"] = *meta.comment_count;
            }
            lines += j.dump() + "\n";
        } catch (const QuotaError &e) {
            err << fmt::format("error: {}\n", e.what());
            status = kExitRuntime;
            break;
        } catch (const NotFoundError &e) {
            err << fmt::format("not found: {}\n", e.what());
            status = std::max(status, kExitValidation);
        } catch (const ValidationError &e) {
            err << fmt::format("invalid: {}: {}\n", id, e.what());
            status = std::max(status, kExitValidation);
        } catch (const Error &e) {
            err << fmt::format("error: {}: {}\n", id, e.what());
            status = kExitRuntime;
        }
    }
    write_file(config.out / "metadata.jsonl", lines);
    out << fmt::format("wrote {} record(s) to {}\n", std::count(lines.begin(), lines.end(), '\n'),
                       (config.out / "metadata.jsonl").string());
    return status;
}

}  // namespace

void RunConfig::validate() const {
    if (!fs::is_regular_file(manifest)) {
        throw ValidationError(fmt::format("manifest '{}' does not exist", manifest.string()));
    }
    for (const auto &[flag, path] : {std::pair{"--lexicon", lexicon}, std::pair{"--wordlist", wordlist},
                                     std::pair{"--dale-chall", dale_chall}}) {
        if (path && !fs::is_regular_file(*path)) {
            throw ValidationError(fmt::format("{} file '{}' does not exist", flag, path->string()));
        }
    }
    if (k < 2) {
        throw ValidationError(fmt::format("--k must be at least 2, got {}", k));
    }
    if (jobs == 0) {
        throw ValidationError("--jobs must be at least 1");
    }
    if (min_freq == 0) {
        throw ValidationError("--min-freq must be at least 1");
    }
    SvmConfig{c_param, seed, tol, max_epochs}.validate();
}

nlohmann::json RunConfig::to_json() const {
    return {{"manifest", manifest.string()},
            {"blocks", format_block_list(blocks)},
            {"lexicon", optional_path(lexicon)},
            {"wordlist", optional_path(wordlist)},
            {"dale_chall", optional_path(dale_chall)},
            {"k", k},
            {"seed", seed},
            {"c_param", c_param},
            {"tol", tol},
            {"max_epochs", max_epochs},
            {"min_freq", min_freq},
            {"one_hot_category", one_hot_category},
            {"per_column_norm", per_column_norm},
            {"offline", offline},
            {"configs", configs}};
}

fs::path RunConfig::effective_cache_dir() const { return cache_dir ? *cache_dir : out / "cache"; }

ExtractionResources load_resources(const RunConfig &config) {
    ExtractionResources r;
    if (config.lexicon) {
        r.lexicon = load_lexicon(*config.lexicon);
    }
    if (config.wordlist) {
        r.wordlist = load_ranked_wordlist(*config.wordlist);
    }
    if (config.dale_chall) {
        r.familiar_words = load_word_set(*config.dale_chall);
    }
    r.engagement.one_hot_category = config.one_hot_category;
    return r;
}

DiskBlockCache::DiskBlockCache(fs::path dir, const ExtractionResources &resources, const RunConfig &config)
    : dir_(std::move(dir)), resources_(resources) {
    const auto file_hash = [](const std::optional<fs::path> &p) { return p ? sha256_file(*p) : std::string(); };
    block_configs_ = {
        {"engagement", {{"one_hot_category", resources.engagement.one_hot_category}}},
        {"lexicon", {{"file", file_hash(config.lexicon)}}},
        {"lexrich",
         {{"file", file_hash(config.wordlist)},
          {"sample_size", resources.lexrich.sample_size},
          {"sample_trials", resources.lexrich.sample_trials},
          {"seed", resources.lexrich.seed}}},
        {"readability", {{"file", file_hash(config.dale_chall)}}},
        {"acoustic",
         {{"voicing_threshold", resources.acoustic.voicing_threshold},
          {"min_f0_hz", resources.acoustic.min_f0_hz},
          {"max_f0_hz", resources.acoustic.max_f0_hz}}},
    };
}

std::string DiskBlockCache::block_config_hash(BlockKind kind) const {
    const auto key = std::string(block_name(kind));
    nlohmann::json j = {{"extractor_version", kExtractorVersion},
                        {"block", key},
                        {"config", block_configs_.contains(key) ? block_configs_.at(key) : nlohmann::json()}};
    return sha256_hex(j.dump());
}

fs::path DiskBlockCache::entry_path(const VideoRecord &record, BlockKind kind) const {
    const auto key = sha256_hex(fmt::format("{}|{}|{}", record_content_hash(record), block_name(kind),
                                            block_config_hash(kind)));
    return dir_ / (key + ".json");
}

std::optional<FeatureBlock> DiskBlockCache::load(const VideoRecord &record, BlockKind kind) {
    const auto path = entry_path(record, kind);
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        ++misses_;
        return std::nullopt;
    }
    const auto json = nlohmann::json::parse(in, nullptr, false);
    if (json.is_discarded()) {
        ++misses_;
        return std::nullopt;
    }
    try {
        auto block = block_from_json(json, fixed_block_names(kind, resources_));
        ++hits_;
        return block;
    } catch (const ValidationError &) {
        ++misses_;
        return std::nullopt;
    }
}

void DiskBlockCache::store(const VideoRecord &record, BlockKind kind, const FeatureBlock &block) {
    const auto path = entry_path(record, kind);
    fs::create_directories(dir_);
    const auto tmp = path.string() + ".tmp";
    write_file(tmp, block_to_json(block).dump());
    fs::rename(tmp, path);
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Multimodal misinformation detection for health videos"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig config;
    std::string manifest;
    std::string blocks = "ngrams";
    std::string lexicon, wordlist, dale_chall, out_dir = "out", cache_dir;
    app.add_option("--manifest", manifest, "Manifest (one JSON record per line)");
    app.add_option("--blocks", blocks, "Comma-separated feature blocks: " + valid_block_names())
        ->capture_default_str();
    app.add_option("--lexicon", lexicon, "Word-class lexicon (category<TAB>pattern)");
    app.add_option("--wordlist", wordlist, "Frequency-ranked reference word list");
    app.add_option("--dale-chall", dale_chall, "Familiar-word list for the Dale-Chall index");
    app.add_option("--k", config.k, "Number of folds")->capture_default_str();
    app.add_option("--seed", config.seed, "Seed for folds and training order")->capture_default_str();
    app.add_option("--c-param", config.c_param, "SVM regularization C")->capture_default_str();
    app.add_option("--tol", config.tol, "SVM projected-gradient tolerance")->capture_default_str();
    app.add_option("--max-epochs", config.max_epochs, "SVM epoch limit")->capture_default_str();
    app.add_option("--min-freq", config.min_freq, "Minimum total term count for tf-idf vocabularies")
        ->capture_default_str();
    app.add_flag("--one-hot-category", config.one_hot_category, "One indicator per category code");
    app.add_flag("--per-column-norm", config.per_column_norm, "Scale columns instead of per-record blocks");
    app.add_option("--out", out_dir, "Output directory")->capture_default_str();
    app.add_option("--cache-dir", cache_dir, "Block cache directory (default <out>/cache)");
    app.add_flag("--offline", config.offline, "Replay cached metadata only");
    app.add_option("--jobs", config.jobs, "Worker threads")->capture_default_str();

    auto *ingest = app.add_subcommand("ingest", "Validate a manifest and print corpus statistics");
    auto *extract = app.add_subcommand("extract", "Extract feature blocks per record");
    auto *train = app.add_subcommand("train", "Train a linear SVM on the whole corpus");
    auto *evaluate = app.add_subcommand("evaluate", "Stratified k-fold evaluation of one block set");
    auto *ablate = app.add_subcommand("ablate", "Evaluate every ablation row on a shared fold plan");
    ablate->add_option("--configs", config.configs, "Rows as name=block,block;name=block");
    auto *fetch = app.add_subcommand("fetch-metadata", "Fetch engagement metadata for video ids");
    FetchArgs fetch_args;
    fetch->add_option("--ids", fetch_args.ids, "Comma-separated video ids (default: manifest ids)");
    fetch->add_option("--api-key", fetch_args.api_key, "API key (default: $MISINFO_API_KEY)");
    fetch->add_option("--date", fetch_args.date, "Query date YYYY-MM-DD (default: today, UTC)");
    fetch->add_option("--metadata-cache", fetch_args.metadata_cache, "Response cache (default <out>/metadata_cache)");
    auto *report = app.add_subcommand("report", "Render a saved report detail file as a table");
    std::string report_input;
    bool pooled = false;
    report->add_option("--input", report_input, "Detail JSON written by evaluate or ablate")->required();
    report->add_flag("--pooled", pooled, "Show pooled instead of macro-averaged metrics");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        config.manifest = manifest;
        config.out = out_dir;
        if (!lexicon.empty()) config.lexicon = lexicon;
        if (!wordlist.empty()) config.wordlist = wordlist;
        if (!dale_chall.empty()) config.dale_chall = dale_chall;
        if (!cache_dir.empty()) config.cache_dir = cache_dir;
        config.blocks = parse_block_list(blocks);
        const bool blocks_given = app.count("--blocks") > 0;

        if (ingest->parsed()) return cmd_ingest(config, out, err);
        if (extract->parsed()) return cmd_extract(config, out, err);
        if (train->parsed()) return cmd_train(config, out, err);
        if (evaluate->parsed()) return cmd_evaluate(config, out, err);
        if (ablate->parsed()) return cmd_ablate(config, blocks_given, out, err);
        if (fetch->parsed()) return cmd_fetch(config, fetch_args, out, err);
        if (report->parsed()) return cmd_report(report_input, pooled, out);
    } catch (const ValidationError &e) {
        err << fmt::format("error: {}\n", e.what());
        return kExitValidation;
    } catch (const std::exception &e) {
        err << fmt::format("error: {}\n", e.what());
        return kExitRuntime;
    }
    return kExitValidation;
}

}  // namespace misinfo::cli
