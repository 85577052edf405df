#ifndef MISINFO_AUDIO_HPP
#define MISINFO_AUDIO_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace misinfo {

inline constexpr int kSampleRate = 16000;

/// Mono clip with samples in [-1, 1] at 16 kHz.
struct AudioClip {
    std::vector<double> samples;
    int sample_rate{kSampleRate};

    /// Throws ValidationError unless the rate is 16 kHz and at least one
    /// 400-sample frame fits.
    void validate() const;
};

/// Reads a 16-bit PCM mono 16 kHz WAV file. Any other layout is rejected with
/// a message asking for resampling.
[[nodiscard]] AudioClip read_wav(const std::filesystem::path &path);

/// Parses WAV bytes already in memory.
[[nodiscard]] AudioClip decode_wav(std::span<const std::uint8_t> bytes);

/// Writes 16-bit PCM mono; samples are clamped to [-1, 1].
void write_wav(const std::filesystem::path &path, const AudioClip &clip);
[[nodiscard]] std::vector<std::uint8_t> encode_wav(const AudioClip &clip);

}  // namespace misinfo

#endif  // MISINFO_AUDIO_HPP
