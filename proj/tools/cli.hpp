#ifndef MISINFO_TOOLS_CLI_HPP
#define MISINFO_TOOLS_CLI_HPP

#include "misinfo/evaluation.hpp"
#include "misinfo/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace misinfo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

struct RunConfig {
    std::filesystem::path manifest;
    std::vector<BlockKind> blocks;
    std::optional<std::filesystem::path> lexicon;
    std::optional<std::filesystem::path> wordlist;
    std::optional<std::filesystem::path> dale_chall;
    std::size_t k{5};
    std::uint64_t seed{kDefaultSeed};
    double c_param{1.0};
    double tol{1e-4};
    std::size_t max_epochs{10000};
    std::uint64_t min_freq{kDefaultMinTotalFreq};
    bool one_hot_category{false};
    bool per_column_norm{false};
    std::filesystem::path out{"out"};
    std::optional<std::filesystem::path> cache_dir;
    bool offline{false};
    std::size_t jobs{1};
    std::string configs;  // ablation rows; empty means the default set

    /// Throws ValidationError when a referenced file is missing or a number
    /// is out of range.
    void validate() const;
    /// Settings that affect results; output location, cache and thread count
    /// are left out so reports compare across runs.
    [[nodiscard]] nlohmann::json to_json() const;
    [[nodiscard]] std::filesystem::path effective_cache_dir() const;
};

[[nodiscard]] ExtractionResources load_resources(const RunConfig &config);

/// File-per-entry block store keyed by (record content hash, block, block
/// config hash). Safe to share between extraction threads.
class DiskBlockCache : public BlockCache {
  public:
    DiskBlockCache(std::filesystem::path dir, const ExtractionResources &resources, const RunConfig &config);

    std::optional<FeatureBlock> load(const VideoRecord &record, BlockKind kind) override;
    void store(const VideoRecord &record, BlockKind kind, const FeatureBlock &block) override;

    [[nodiscard]] std::size_t hits() const { return hits_; }
    [[nodiscard]] std::size_t misses() const { return misses_; }
    [[nodiscard]] std::string block_config_hash(BlockKind kind) const;

  private:
    [[nodiscard]] std::filesystem::path entry_path(const VideoRecord &record, BlockKind kind) const;

    std::filesystem::path dir_;
    const ExtractionResources &resources_;
    nlohmann::json block_configs_;
    std::atomic<std::size_t> hits_{0};
    std::atomic<std::size_t> misses_{0};
};

/// Parses argv and runs one subcommand. Returns the process exit code.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace misinfo::cli

#endif  // MISINFO_TOOLS_CLI_HPP
