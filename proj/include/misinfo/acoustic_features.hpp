#ifndef MISINFO_ACOUSTIC_FEATURES_HPP
#define MISINFO_ACOUSTIC_FEATURES_HPP

#include "misinfo/audio.hpp"
#include "misinfo/feature_block.hpp"

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace misinfo {

inline constexpr std::size_t kFrameLength = 400;  // 25 ms
inline constexpr std::size_t kFrameHop = 160;     // 10 ms
inline constexpr std::size_t kFftSize = 512;
inline constexpr std::size_t kMelFilters = 26;
inline constexpr std::size_t kNumCeps = 12;
inline constexpr std::size_t kLldCount = 16;
inline constexpr std::size_t kFunctionalCount = 12;
inline constexpr std::size_t kIs09Dim = 2 * kLldCount * kFunctionalCount;  // 384
inline constexpr double kLogFloor = 1e-10;
inline constexpr double kEnergyFloor = 1e-10;

/// LLD columns; deltas follow at +kLldCount.
namespace lld {
inline constexpr std::size_t kEnergy = 0;
inline constexpr std::size_t kMfccFirst = 1;  // MFCC 1..12 at columns 1..12
inline constexpr std::size_t kZcr = 13;
inline constexpr std::size_t kVoicing = 14;
inline constexpr std::size_t kF0 = 15;
}  // namespace lld

/// Functional order within each LLD's 12 slots.
namespace functional {
inline constexpr std::size_t kMax = 0;
inline constexpr std::size_t kMin = 1;
inline constexpr std::size_t kRange = 2;
inline constexpr std::size_t kMaxPos = 3;
inline constexpr std::size_t kMinPos = 4;
inline constexpr std::size_t kMean = 5;
inline constexpr std::size_t kSlope = 6;
inline constexpr std::size_t kOffset = 7;
inline constexpr std::size_t kRegressionMse = 8;
inline constexpr std::size_t kStdDev = 9;
inline constexpr std::size_t kSkewness = 10;
inline constexpr std::size_t kKurtosis = 11;
}  // namespace functional

/// Slot of (lld column, functional) in the 384-vector: LLD-major.
[[nodiscard]] constexpr std::size_t is09_slot(std::size_t lld_column, std::size_t functional_index) {
    return lld_column * kFunctionalCount + functional_index;
}

struct AcousticOptions {
    double voicing_threshold{0.45};
    double min_f0_hz{60.0};
    double max_f0_hz{500.0};
};

/// floor((n - 400) / 160) + 1; throws ValidationError when n < 400.
[[nodiscard]] std::size_t frame_count(std::size_t n_samples);

[[nodiscard]] const std::array<double, kFrameLength> &hamming_window();

/// Hamming-windowed 25 ms frames at a 10 ms hop; the trailing partial frame
/// is dropped.
[[nodiscard]] std::vector<std::vector<double>> frame_signal(const AudioClip &clip);

/// 512-point FFT magnitude -> 26 mel triangles over 0-8000 Hz -> floored log
/// -> orthonormal DCT-II, coefficients 1..12. One instance per thread.
class MfccComputer {
  public:
    MfccComputer();
    ~MfccComputer();
    MfccComputer(const MfccComputer &) = delete;
    MfccComputer &operator=(const MfccComputer &) = delete;

    [[nodiscard]] std::array<double, kNumCeps> compute(std::span<const double> windowed_frame);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

[[nodiscard]] std::array<double, kNumCeps> mfcc12(std::span<const double> windowed_frame);

/// Mel filter weights, kMelFilters rows by kFftSize/2+1 bins.
[[nodiscard]] const std::vector<std::vector<double>> &mel_filterbank();

struct PitchEstimate {
    double f0_hz{0.0};
    double voicing_prob{0.0};
};

/// Normalized autocorrelation over lags for [min_f0, max_f0]; the first local
/// peak within 90% of the best one wins, refined by parabolic interpolation.
/// f0 is 0 when the peak is below the voicing threshold.
[[nodiscard]] PitchEstimate f0_autocorr(std::span<const double> frame, const AcousticOptions &options = {});

/// Regression delta, window +-2, denominator 10, edges replicated.
[[nodiscard]] std::vector<double> delta(std::span<const double> contour);

using FunctionalSet = std::array<double, kFunctionalCount>;

/// The 12 contour statistics; population moments, skewness and kurtosis 0 on
/// a constant contour. Needs at least 2 frames.
[[nodiscard]] FunctionalSet apply_functionals(std::span<const double> contour);

/// 32 contours (16 LLDs then their deltas), each n_frames long.
struct LldMatrix {
    std::size_t n_frames{0};
    std::array<std::vector<double>, 2 * kLldCount> columns;
};

[[nodiscard]] LldMatrix compute_lld(const AudioClip &clip, const AcousticOptions &options = {});

[[nodiscard]] const FeatureNames &is09_feature_names();

[[nodiscard]] FeatureBlock is09_block(const AudioClip &clip, const AcousticOptions &options = {});

}  // namespace misinfo

#endif  // MISINFO_ACOUSTIC_FEATURES_HPP
