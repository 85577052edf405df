#include "misinfo/pipeline.hpp"

#include "misinfo/audio.hpp"
#include "misinfo/error.hpp"
#include "misinfo/hash.hpp"
#include "misinfo/parse_tree.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace misinfo {

void ExtractionResources::require(std::span<const BlockKind> blocks) const {
    for (const auto kind : blocks) {
        if (kind == BlockKind::Lexicon && !lexicon) {
            throw ValidationError("the lexicon block needs a lexicon file (--lexicon)");
        }
        if (kind == BlockKind::LexRich && !wordlist) {
            throw ValidationError("the lexrich block needs a ranked word list (--wordlist)");
        }
        if (kind == BlockKind::Readability && !familiar_words) {
            throw ValidationError("the readability block needs a familiar-word list (--dale-chall)");
        }
    }
}

std::vector<BlockKind> canonical_blocks(std::span<const BlockKind> blocks) {
    if (blocks.empty()) {
        throw ValidationError("no feature block enabled");
    }
    std::vector<BlockKind> out;
    for (const auto kind : kCanonicalBlockOrder) {
        if (std::find(blocks.begin(), blocks.end(), kind) != blocks.end()) {
            out.push_back(kind);
        }
    }
    return out;
}

std::vector<BlockKind> parse_block_list(std::string_view text) {
    std::vector<BlockKind> blocks;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = std::min(text.find(',', start), text.size());
        auto name = text.substr(start, comma - start);
        while (!name.empty() && name.front() == ' ') {
            name.remove_prefix(1);
        }
        while (!name.empty() && name.back() == ' ') {
            name.remove_suffix(1);
        }
        if (!name.empty()) {
            const auto kind = parse_block_name(name);
            if (!kind) {
                throw ValidationError(fmt::format("unknown block '{}'; valid blocks: {}", name, valid_block_names()));
            }
            blocks.push_back(*kind);
        }
        start = comma + 1;
    }
    return canonical_blocks(blocks);
}

std::string format_block_list(std::span<const BlockKind> blocks) {
    std::string out;
    for (const auto kind : blocks) {
        if (!out.empty()) {
            out += ',';
        }
        out += block_name(kind);
    }
    return out;
}

bool PreparedRecord::has(BlockKind kind) const {
    if (kind == BlockKind::Ngrams) {
        return ngram_terms.has_value();
    }
    if (kind == BlockKind::Syntax) {
        return syntax_terms.has_value();
    }
    return blocks.contains(kind);
}

std::vector<Label> PreparedCorpus::labels() const {
    std::vector<Label> out;
    out.reserve(records.size());
    for (const auto &r : records) {
        out.push_back(r.label);
    }
    return out;
}

std::vector<std::string> PreparedCorpus::ids() const {
    std::vector<std::string> out;
    out.reserve(records.size());
    for (const auto &r : records) {
        out.push_back(r.id);
    }
    return out;
}

std::vector<SkipEntry> PreparedCorpus::skip_report(std::span<const BlockKind> blocks) const {
    std::vector<SkipEntry> out;
    for (const auto &r : records) {
        for (const auto kind : blocks) {
            if (r.has(kind)) {
                continue;
            }
            const auto it = r.unavailable.find(kind);
            out.push_back({r.id, kind, it != r.unavailable.end() ? it->second : "block was not extracted"});
        }
    }
    return out;
}

std::vector<std::size_t> PreparedCorpus::usable(std::span<const std::size_t> indices,
                                                std::span<const BlockKind> blocks) const {
    std::vector<std::size_t> out;
    for (const auto i : indices) {
        const auto &r = records.at(i);
        if (std::all_of(blocks.begin(), blocks.end(), [&](BlockKind k) { return r.has(k); })) {
            out.push_back(i);
        }
    }
    return out;
}

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)> &fn) {
    jobs = std::max<std::size_t>(1, std::min(jobs, n));
    if (jobs == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        while (true) {
            const auto i = next.fetch_add(1);
            if (i >= n) {
                return;
            }
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(n);
            }
        }
    };
    std::vector<std::thread> threads;
    threads.reserve(jobs);
    for (std::size_t t = 0; t < jobs; ++t) {
        threads.emplace_back(worker);
    }
    for (auto &t : threads) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

namespace {

std::vector<ParseTree> parse_record_trees(const VideoRecord &record) {
    std::vector<ParseTree> trees;
    trees.reserve(record.parse_trees->size());
    for (std::size_t i = 0; i < record.parse_trees->size(); ++i) {
        try {
            trees.push_back(parse_bracketed((*record.parse_trees)[i]));
        } catch (const ValidationError &e) {
            throw ValidationError(fmt::format("parse tree {}: {}", i + 1, e.what()));
        }
    }
    return trees;
}

}  // namespace

AnnotatedText annotate_record(const VideoRecord &record, std::string *pos_issue) {
    if (record.pos_lines) {
        try {
            return annotate(record.transcript, record.pos_lines);
        } catch (const MissingModalityError &e) {
            if (pos_issue != nullptr) {
                *pos_issue = e.what();
            }
            return annotate(record.transcript);
        }
    }
    auto annotated = annotate(record.transcript);
    if (!record.parse_trees) {
        if (pos_issue != nullptr) {
            *pos_issue = "no POS tags: record has neither a POS file nor parse trees";
        }
        return annotated;
    }
    try {
        std::vector<std::vector<std::pair<std::string, std::string>>> tagged;
        for (const auto &tree : parse_record_trees(record)) {
            tagged.push_back(tagged_leaves(tree));
        }
        attach_pos(annotated, tagged);
    } catch (const Error &e) {
        if (pos_issue != nullptr) {
            *pos_issue = fmt::format("no POS tags: parse-tree leaves do not align with the transcript ({})", e.what());
        }
    }
    return annotated;
}

FeatureNames fixed_block_names(BlockKind kind, const ExtractionResources &resources) {
    switch (kind) {
    case BlockKind::Engagement: return engagement_feature_names(resources.engagement);
    case BlockKind::Lexicon:
        resources.require(std::span(&kind, 1));
        return lexicon_feature_names(*resources.lexicon);
    case BlockKind::LexRich: return lexrich_feature_names();
    case BlockKind::Readability: return readability_feature_names();
    case BlockKind::Acoustic: return is09_feature_names();
    case BlockKind::Ngrams:
    case BlockKind::Syntax: break;
    }
    throw ValidationError(fmt::format("{} block has a fitted layout", block_name(kind)));
}

FeatureBlock extract_fixed_block(const VideoRecord &record, const AnnotatedText &annotated, BlockKind kind,
                                 const ExtractionResources &resources) {
    resources.require(std::span(&kind, 1));
    switch (kind) {
    case BlockKind::Engagement: return engagement_block(record.engagement, resources.engagement);
    case BlockKind::Lexicon: return lexicon_features(annotated, *resources.lexicon);
    case BlockKind::LexRich: return lexrich_features(annotated, *resources.wordlist, resources.lexrich);
    case BlockKind::Readability: return readability_features(annotated, *resources.familiar_words);
    case BlockKind::Acoustic:
        if (!record.audio_path) {
            throw MissingModalityError("record has no audio");
        }
        return is09_block(read_wav(*record.audio_path), resources.acoustic);
    case BlockKind::Ngrams:
    case BlockKind::Syntax: break;
    }
    throw ValidationError(fmt::format("{} block has a fitted layout", block_name(kind)));
}

PreparedRecord prepare_record(const VideoRecord &record, std::span<const BlockKind> blocks,
                              const ExtractionResources &resources, BlockCache *cache) {
    PreparedRecord prepared;
    prepared.id = record.id;
    prepared.label = record.label;

    std::optional<AnnotatedText> annotated;
    std::string pos_issue;
    std::string text_issue;
    auto text = [&]() -> const AnnotatedText * {
        if (!annotated && text_issue.empty()) {
            try {
                annotated = annotate_record(record, &pos_issue);
            } catch (const Error &e) {
                text_issue = e.what();
            }
        }
        return annotated ? &*annotated : nullptr;
    };

    for (const auto kind : blocks) {
        try {
            if (kind == BlockKind::Ngrams) {
                if (const auto *t = text()) {
                    prepared.ngram_terms = ngram_terms(*t);
                } else {
                    prepared.unavailable[kind] = text_issue;
                }
                continue;
            }
            if (kind == BlockKind::Syntax) {
                if (!record.parse_trees) {
                    prepared.unavailable[kind] = "record has no parse trees";
                    continue;
                }
                const auto trees = parse_record_trees(record);
                prepared.syntax_terms = syntax_terms(trees);
                continue;
            }
            if (cache != nullptr) {
                if (auto hit = cache->load(record, kind)) {
                    prepared.blocks.emplace(kind, std::move(*hit));
                    continue;
                }
            }
            const bool needs_text = kind != BlockKind::Engagement && kind != BlockKind::Acoustic;
            const AnnotatedText empty;
            const AnnotatedText *t = needs_text ? text() : &empty;
            if (t == nullptr) {
                prepared.unavailable[kind] = text_issue;
                continue;
            }
            if (kind == BlockKind::LexRich && !t->has_pos()) {
                prepared.unavailable[kind] = pos_issue.empty() ? "no POS tags" : pos_issue;
                continue;
            }
            auto block = extract_fixed_block(record, *t, kind, resources);
            if (cache != nullptr) {
                cache->store(record, kind, block);
            }
            prepared.blocks.emplace(kind, std::move(block));
        } catch (const Error &e) {
            prepared.unavailable[kind] = e.what();
        }
    }
    return prepared;
}

PreparedCorpus prepare_corpus(const std::vector<VideoRecord> &records, std::span<const BlockKind> blocks,
                              const ExtractionResources &resources, std::size_t jobs, BlockCache *cache) {
    resources.require(blocks);
    PreparedCorpus corpus;
    corpus.records.resize(records.size());
    parallel_for(records.size(), jobs,
                 [&](std::size_t i) { corpus.records[i] = prepare_record(records[i], blocks, resources, cache); });
    return corpus;
}

FoldContext fit_fold_context(const PreparedCorpus &corpus, std::span<const std::size_t> train,
                             std::span<const BlockKind> blocks, std::uint64_t min_total_freq) {
    FoldContext context;
    const auto fit = [&](BlockKind kind) {
        std::vector<std::vector<std::string>> docs;
        for (const auto i : train) {
            const auto &r = corpus.records.at(i);
            const auto &terms = kind == BlockKind::Ngrams ? r.ngram_terms : r.syntax_terms;
            if (terms) {
                docs.push_back(*terms);
            }
        }
        if (docs.empty()) {
            throw ValidationError(fmt::format("no training record has the {} block", block_name(kind)));
        }
        return fit_tfidf_vocab(docs, min_total_freq);
    };
    for (const auto kind : blocks) {
        if (kind == BlockKind::Ngrams) {
            context.ngrams = fit(kind);
        } else if (kind == BlockKind::Syntax) {
            context.syntax = fit(kind);
        }
    }
    return context;
}

FeatureMatrix assemble(const PreparedCorpus &corpus, std::span<const std::size_t> indices,
                       std::span<const BlockKind> blocks, const FoldContext &context,
                       std::vector<std::string> *warnings) {
    const auto ordered = canonical_blocks(blocks);
    std::vector<RowBlocks> rows;
    rows.reserve(indices.size());
    for (const auto i : indices) {
        const auto &r = corpus.records.at(i);
        RowBlocks row{r.id, {}};
        for (const auto kind : ordered) {
            if (!r.has(kind)) {
                const auto it = r.unavailable.find(kind);
                throw MissingModalityError(fmt::format("record '{}' lacks the {} block: {}", r.id, block_name(kind),
                                                       it != r.unavailable.end() ? it->second : "not extracted"));
            }
            if (kind == BlockKind::Ngrams || kind == BlockKind::Syntax) {
                const auto &vocab = kind == BlockKind::Ngrams ? context.ngrams : context.syntax;
                if (!vocab) {
                    throw ValidationError(fmt::format("no fitted vocabulary for the {} block", block_name(kind)));
                }
                const auto &terms = kind == BlockKind::Ngrams ? *r.ngram_terms : *r.syntax_terms;
                row.blocks.push_back(tfidf_vector(terms, *vocab, kind));
            } else {
                row.blocks.push_back(r.blocks.at(kind));
            }
        }
        rows.push_back(std::move(row));
    }
    return assemble_rows(rows, warnings);
}

std::string record_content_hash(const VideoRecord &record) {
    nlohmann::json j;
    j["id"] = record.id;
    j["transcript"] = record.transcript;
    j["parse_trees"] = record.parse_trees ? nlohmann::json(*record.parse_trees) : nlohmann::json();
    j["pos_lines"] = record.pos_lines ? nlohmann::json(*record.pos_lines) : nlohmann::json();
    j["audio"] = record.audio_path ? sha256_file(*record.audio_path) : std::string();
    const auto &e = record.engagement;
    j["engagement"] = {e.view_count,
                       format_iso_date(e.publish_date),
                       format_iso_date(e.query_date),
                       e.comment_count ? nlohmann::json(*e.comment_count) : nlohmann::json(),
                       e.thumbs_up,
                       e.thumbs_down,
                       e.duration_s,
                       e.category_id};
    return sha256_hex(j.dump());
}

nlohmann::json block_to_json(const FeatureBlock &block) {
    nlohmann::json j;
    j["block"] = block_name(block.kind);
    j["dim"] = block.dim;
    if (block.is_sparse()) {
        const auto &sparse = std::get<SparseVector>(block.values);
        j["indices"] = sparse.indices;
        j["values"] = sparse.values;
    } else {
        j["values"] = std::get<std::vector<double>>(block.values);
    }
    j["warnings"] = block.warnings;
    return j;
}

FeatureBlock block_from_json(const nlohmann::json &json, FeatureNames names) {
    try {
        const auto kind = parse_block_name(json.at("block").get<std::string>());
        if (!kind) {
            throw ValidationError("stored block has an unknown name");
        }
        FeatureBlock block;
        if (json.contains("indices")) {
            block = make_sparse_block(*kind, std::move(names),
                                      {json.at("indices").get<std::vector<std::uint32_t>>(),
                                       json.at("values").get<std::vector<double>>()});
        } else {
            block = make_dense_block(*kind, std::move(names), json.at("values").get<std::vector<double>>());
        }
        if (block.dim != json.at("dim").get<std::size_t>()) {
            throw ValidationError("stored block dimension does not match its feature names");
        }
        block.warnings = json.value("warnings", std::vector<std::string>{});
        return block;
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(fmt::format("malformed stored block: {}", e.what()));
    }
}

}  // namespace misinfo
