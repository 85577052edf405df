#include "test_support.hpp"

#include "misinfo/rng.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#ifndef MISINFO_FIXTURE_DIR
#error "MISINFO_FIXTURE_DIR must point at tests/fixtures"
#endif

namespace misinfo::testing {

namespace fs = std::filesystem;

fs::path fixture_path(std::string_view relative) { return fs::path(MISINFO_FIXTURE_DIR) / relative; }

TempDir::TempDir(std::string_view tag) {
    static std::uint64_t counter = 0;
    Rng rng(static_cast<std::uint64_t>(std::chrono::steady_clock::now().time_since_epoch().count()));
    for (int attempt = 0; attempt < 100; ++attempt) {
        auto candidate = fs::temp_directory_path() / fmt::format("{}-{}-{:x}", tag, ++counter, rng());
        if (fs::create_directory(candidate)) {
            path_ = std::move(candidate);
            return;
        }
    }
    throw std::runtime_error("cannot create a temporary directory");
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

void write_text(const fs::path &path, std::string_view text) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

std::string read_text(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

AudioClip tone(double hz, double seconds, double amplitude) {
    AudioClip clip;
    const auto n = static_cast<std::size_t>(std::lround(seconds * kSampleRate));
    clip.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        clip.samples[i] = amplitude * std::sin(2.0 * std::numbers::pi * hz * static_cast<double>(i) / kSampleRate);
    }
    return clip;
}

AudioClip silence(double seconds) {
    AudioClip clip;
    clip.samples.assign(static_cast<std::size_t>(std::lround(seconds * kSampleRate)), 0.0);
    return clip;
}

AudioClip white_noise(double seconds, std::uint64_t seed, double amplitude) {
    AudioClip clip;
    Rng rng(seed);
    clip.samples.resize(static_cast<std::size_t>(std::lround(seconds * kSampleRate)));
    for (auto &s : clip.samples) {
        const double u = static_cast<double>(uniform_below(rng, 1u << 20)) / static_cast<double>(1u << 20);
        s = amplitude * (2.0 * u - 1.0);
    }
    return clip;
}

namespace {

template <std::size_t N>
std::string_view pick(const std::array<std::string_view, N> &words, Rng &rng) {
    return words[uniform_below(rng, N)];
}

constexpr std::array<std::string_view, 3> kDeterminers{"the", "a", "this"};
constexpr std::array<std::string_view, 8> kAdjectives{"new", "common", "early", "simple", "serious", "small", "large", "old"};
constexpr std::array<std::string_view, 10> kNouns{"patient", "doctor", "treatment", "study", "result",
                                                  "risk",    "option", "therapy",   "test",  "cancer"};
constexpr std::array<std::string_view, 6> kVerbs{"shows", "reduces", "helps", "supports", "improves", "changes"};
constexpr std::array<std::string_view, 5> kMiracleAdjectives{"miracle", "secret", "herbal", "natural", "guaranteed"};
constexpr std::array<std::string_view, 5> kMiracleNouns{"cure", "detox", "remedy", "tonic", "cleanse"};
constexpr std::array<std::string_view, 5> kClinicalAdjectives{"clinical", "randomized", "published", "approved",
                                                              "standard"};
constexpr std::array<std::string_view, 5> kClinicalNouns{"trial", "evidence", "guideline", "screening", "biopsy"};

std::string capitalized(std::string_view word) {
    std::string out(word);
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    return out;
}

struct Sentence {
    std::string text;
    std::string pos;
    std::string tree;
};

Sentence make_sentence(Rng &rng, int marker_class) {
    const auto det1 = capitalized(pick(kDeterminers, rng));
    const auto adj1 = pick(kAdjectives, rng);
    const auto noun1 = pick(kNouns, rng);
    const auto verb = pick(kVerbs, rng);
    const auto det2 = pick(kDeterminers, rng);
    std::string_view adj2;
    std::string_view noun2;
    if (marker_class == 1) {
        adj2 = pick(kMiracleAdjectives, rng);
        noun2 = pick(kMiracleNouns, rng);
    } else if (marker_class == 0) {
        adj2 = pick(kClinicalAdjectives, rng);
        noun2 = pick(kClinicalNouns, rng);
    } else {
        adj2 = pick(kAdjectives, rng);
        noun2 = pick(kNouns, rng);
    }
    Sentence s;
    s.text = fmt::format("{} {} {} {} {} {} {}.", det1, adj1, noun1, verb, det2, adj2, noun2);
    s.pos = fmt::format("{}_DT {}_JJ {}_NN {}_VBZ {}_DT {}_JJ {}_NN ._.", det1, adj1, noun1, verb, det2, adj2, noun2);
    s.tree = fmt::format("(ROOT (S (NP (DT {}) (JJ {}) (NN {})) (VP (VBZ {}) (NP (DT {}) (JJ {}) (NN {}))) (. .)))", det1,
                         adj1, noun1, verb, det2, adj2, noun2);
    return s;
}

}  // namespace

std::vector<PlantedDoc> planted_docs(const PlantedCorpusOptions &options) {
    Rng rng(options.seed);
    std::vector<PlantedDoc> docs;
    const auto total = options.n_trustworthy + options.n_misinformative;
    for (std::size_t d = 0; d < total; ++d) {
        const bool misinformative = d >= options.n_trustworthy;
        PlantedDoc doc;
        doc.id = fmt::format("doc{:03d}", d);
        doc.score = misinformative ? static_cast<int>(2 + uniform_below(rng, 4)) : 1;
        std::vector<std::size_t> order(options.sentences_per_doc);
        for (std::size_t i = 0; i < order.size(); ++i) {
            order[i] = i;
        }
        shuffle_in_place(std::span(order), rng);
        std::vector<bool> marked(options.sentences_per_doc, false);
        for (std::size_t i = 0; i < std::min(options.marked_sentences, order.size()); ++i) {
            marked[order[i]] = true;
        }
        for (std::size_t s = 0; s < options.sentences_per_doc; ++s) {
            const auto sentence = make_sentence(rng, marked[s] ? (misinformative ? 1 : 0) : -1);
            doc.transcript += (s == 0 ? "" : " ") + sentence.text;
            doc.pos_lines.push_back(sentence.pos);
            doc.trees.push_back(sentence.tree);
        }
        auto &e = doc.engagement;
        if (options.flat_engagement) {
            e.view_count = 5000;
            e.publish_date = Date{std::chrono::year{2017}, std::chrono::month{6}, std::chrono::day{1}};
            e.comment_count = 40;
            e.thumbs_up = 100;
            e.thumbs_down = 10;
            e.duration_s = 300.0;
            e.category_id = 27;
        } else {
            e.view_count = 1000 + uniform_below(rng, 100000);
            const auto offset = std::chrono::days{static_cast<int>(uniform_below(rng, 1200))};
            e.publish_date = Date{std::chrono::sys_days{Date{std::chrono::year{2015}, std::chrono::month{1},
                                                             std::chrono::day{1}}} + offset};
            if (uniform_below(rng, 5) != 0) {
                e.comment_count = uniform_below(rng, 500);
            }
            e.thumbs_up = uniform_below(rng, 2000);
            e.thumbs_down = uniform_below(rng, 200);
            e.duration_s = 60.0 + static_cast<double>(uniform_below(rng, 540));
            e.category_id = kCategoryRegistry[uniform_below(rng, kCategoryRegistry.size())];
        }
        e.query_date = Date{std::chrono::year{2019}, std::chrono::month{4}, std::chrono::day{18}};
        docs.push_back(std::move(doc));
    }
    if (options.permute_labels) {
        Rng shuffle_rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
        std::vector<int> scores;
        for (const auto &doc : docs) {
            scores.push_back(doc.score);
        }
        shuffle_in_place(std::span(scores), shuffle_rng);
        for (std::size_t i = 0; i < docs.size(); ++i) {
            docs[i].score = scores[i];
        }
    }
    return docs;
}

std::vector<VideoRecord> planted_records(const PlantedCorpusOptions &options) {
    std::vector<VideoRecord> records;
    for (auto &doc : planted_docs(options)) {
        VideoRecord r;
        r.id = doc.id;
        r.transcript = doc.transcript;
        if (options.with_pos) {
            r.pos_lines = doc.pos_lines;
        }
        if (options.with_trees) {
            r.parse_trees = doc.trees;
        }
        r.engagement = doc.engagement;
        r.score = doc.score;
        r.label = binarize_label(doc.score);
        records.push_back(std::move(r));
    }
    return records;
}

fs::path write_planted_corpus(const fs::path &dir, const PlantedCorpusOptions &options) {
    fs::create_directories(dir);
    std::string manifest;
    Rng audio_rng(options.seed + 1);
    for (const auto &doc : planted_docs(options)) {
        const auto transcript = fmt::format("text/{}.txt", doc.id);
        write_text(dir / transcript, doc.transcript + "\n");
        const auto &e = doc.engagement;
        nlohmann::json line = {{"id", doc.id},
                               {"transcript_path", transcript},
                               {"score", doc.score},
                               {"views", e.view_count},
                               {"publish_date", format_iso_date(e.publish_date)},
                               {"query_date", format_iso_date(e.query_date)},
                               {"thumbs_up", e.thumbs_up},
                               {"thumbs_down", e.thumbs_down},
                               {"duration_s", e.duration_s},
                               {"category_id", e.category_id}};
        if (e.comment_count) {
            line["comment_count"] = *e.comment_count;
        }
        if (options.with_pos) {
            const auto pos = fmt::format("pos/{}.pos", doc.id);
            std::string body;
            for (const auto &l : doc.pos_lines) {
                body += l + "\n";
            }
            write_text(dir / pos, body);
            line["pos_path"] = pos;
        }
        if (options.with_trees) {
            const auto trees = fmt::format("trees/{}.mrg", doc.id);
            std::string body;
            for (const auto &t : doc.trees) {
                body += t + "\n";
            }
            write_text(dir / trees, body);
            line["parse_path"] = trees;
        }
        if (options.with_audio) {
            const auto audio = fmt::format("audio/{}.wav", doc.id);
            fs::create_directories(dir / "audio");
            auto clip = tone(110.0 + static_cast<double>(uniform_below(audio_rng, 200)), 0.5, 0.4);
            write_wav(dir / audio, clip);
            line["audio_path"] = audio;
        }
        manifest += line.dump() + "\n";
    }
    const auto path = dir / "manifest.jsonl";
    write_text(path, manifest);
    return path;
}

std::vector<Label> label_counts(std::size_t n_trustworthy, std::size_t n_misinformative) {
    std::vector<Label> labels(n_trustworthy, Label::Trustworthy);
    labels.insert(labels.end(), n_misinformative, Label::Misinformative);
    return labels;
}

std::vector<std::string> numbered_ids(std::size_t n, std::string_view prefix) {
    std::vector<std::string> ids;
    ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        ids.push_back(fmt::format("{}{:04d}", prefix, i));
    }
    return ids;
}

}  // namespace misinfo::testing
