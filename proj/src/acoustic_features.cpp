#include "misinfo/acoustic_features.hpp"

#include "misinfo/error.hpp"

#include <fftw3.h>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

namespace misinfo {

namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
std::mutex &fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

constexpr std::size_t kSpectrumBins = kFftSize / 2 + 1;

std::vector<std::vector<double>> build_filterbank() {
    const double mel_low = hz_to_mel(0.0);
    const double mel_high = hz_to_mel(kSampleRate / 2.0);
    std::vector<double> edges(kMelFilters + 2);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        edges[i] = mel_to_hz(mel_low + (mel_high - mel_low) * static_cast<double>(i) / (kMelFilters + 1));
    }
    std::vector<std::vector<double>> bank(kMelFilters, std::vector<double>(kSpectrumBins, 0.0));
    for (std::size_t m = 0; m < kMelFilters; ++m) {
        const double left = edges[m];
        const double center = edges[m + 1];
        const double right = edges[m + 2];
        for (std::size_t k = 0; k < kSpectrumBins; ++k) {
            const double f = static_cast<double>(k) * kSampleRate / static_cast<double>(kFftSize);
            if (f > left && f < center) {
                bank[m][k] = (f - left) / (center - left);
            } else if (f >= center && f < right) {
                bank[m][k] = (right - f) / (right - center);
            }
        }
    }
    return bank;
}

std::array<std::array<double, kMelFilters>, kNumCeps> build_dct() {
    std::array<std::array<double, kMelFilters>, kNumCeps> dct{};
    const double scale = std::sqrt(2.0 / static_cast<double>(kMelFilters));
    for (std::size_t i = 0; i < kNumCeps; ++i) {
        for (std::size_t m = 0; m < kMelFilters; ++m) {
            dct[i][m] = scale * std::cos(std::numbers::pi * static_cast<double>(i + 1) * (static_cast<double>(m) + 0.5) /
                                         static_cast<double>(kMelFilters));
        }
    }
    return dct;
}

double rms_energy(std::span<const double> raw) {
    double sum = 0.0;
    for (const double x : raw) {
        sum += x * x;
    }
    return std::max(std::sqrt(sum / static_cast<double>(raw.size())), kEnergyFloor);
}

double zero_crossing_rate(std::span<const double> raw) {
    std::size_t crossings = 0;
    for (std::size_t i = 1; i < raw.size(); ++i) {
        if ((raw[i - 1] >= 0.0) != (raw[i] >= 0.0)) {
            ++crossings;
        }
    }
    return static_cast<double>(crossings) / static_cast<double>(raw.size() - 1);
}

}  // namespace

std::size_t frame_count(std::size_t n_samples) {
    if (n_samples < kFrameLength) {
        throw ValidationError(fmt::format("clip of {} samples is shorter than one {}-sample frame", n_samples,
                                          kFrameLength));
    }
    return (n_samples - kFrameLength) / kFrameHop + 1;
}

const std::array<double, kFrameLength> &hamming_window() {
    static const auto window = [] {
        std::array<double, kFrameLength> w{};
        for (std::size_t n = 0; n < kFrameLength; ++n) {
            w[n] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) / (kFrameLength - 1));
        }
        return w;
    }();
    return window;
}

std::vector<std::vector<double>> frame_signal(const AudioClip &clip) {
    clip.validate();
    const auto n_frames = frame_count(clip.samples.size());
    const auto &window = hamming_window();
    std::vector<std::vector<double>> frames(n_frames, std::vector<double>(kFrameLength));
    for (std::size_t f = 0; f < n_frames; ++f) {
        const auto *src = clip.samples.data() + f * kFrameHop;
        for (std::size_t n = 0; n < kFrameLength; ++n) {
            frames[f][n] = src[n] * window[n];
        }
    }
    return frames;
}

const std::vector<std::vector<double>> &mel_filterbank() {
    static const auto bank = build_filterbank();
    return bank;
}

struct MfccComputer::Impl {
    double *input{nullptr};
    fftw_complex *output{nullptr};
    fftw_plan plan{nullptr};
    std::array<std::array<double, kMelFilters>, kNumCeps> dct{build_dct()};

    Impl() {
        input = fftw_alloc_real(kFftSize);
        output = fftw_alloc_complex(kSpectrumBins);
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(kFftSize), input, output, FFTW_ESTIMATE);
    }

    ~Impl() {
        {
            std::lock_guard lock(fftw_planner_mutex());
            fftw_destroy_plan(plan);
        }
        fftw_free(input);
        fftw_free(output);
    }
};

MfccComputer::MfccComputer() : impl_(std::make_unique<Impl>()) {}
MfccComputer::~MfccComputer() = default;

std::array<double, kNumCeps> MfccComputer::compute(std::span<const double> windowed_frame) {
    const auto used = std::min(windowed_frame.size(), kFftSize);
    std::copy_n(windowed_frame.begin(), used, impl_->input);
    std::fill(impl_->input + used, impl_->input + kFftSize, 0.0);
    fftw_execute(impl_->plan);

    std::array<double, kSpectrumBins> magnitude{};
    for (std::size_t k = 0; k < kSpectrumBins; ++k) {
        magnitude[k] = std::hypot(impl_->output[k][0], impl_->output[k][1]);
    }
    const auto &bank = mel_filterbank();
    std::array<double, kMelFilters> log_energy{};
    for (std::size_t m = 0; m < kMelFilters; ++m) {
        double energy = 0.0;
        for (std::size_t k = 0; k < kSpectrumBins; ++k) {
            energy += bank[m][k] * magnitude[k];
        }
        log_energy[m] = std::log(std::max(energy, kLogFloor));
    }
    std::array<double, kNumCeps> ceps{};
    for (std::size_t i = 0; i < kNumCeps; ++i) {
        double sum = 0.0;
        for (std::size_t m = 0; m < kMelFilters; ++m) {
            sum += impl_->dct[i][m] * log_energy[m];
        }
        ceps[i] = sum;
    }
    return ceps;
}

std::array<double, kNumCeps> mfcc12(std::span<const double> windowed_frame) {
    thread_local MfccComputer computer;
    return computer.compute(windowed_frame);
}

PitchEstimate f0_autocorr(std::span<const double> frame, const AcousticOptions &options) {
    const auto n = frame.size();
    const auto min_lag = static_cast<std::size_t>(std::floor(kSampleRate / options.max_f0_hz));
    const auto max_lag = std::min(static_cast<std::size_t>(std::ceil(kSampleRate / options.min_f0_hz)), n - 2);
    if (min_lag < 2 || min_lag >= max_lag) {
        return {};
    }
    double total = 0.0;
    for (const double x : frame) {
        total += x * x;
    }
    if (total < 1e-20) {
        return {};
    }

    // r[lag] for lag in [min_lag - 1, max_lag + 1], normalized by the energies
    // of the two overlapping segments.
    std::vector<double> r(max_lag + 2, 0.0);
    for (std::size_t lag = min_lag - 1; lag <= max_lag + 1; ++lag) {
        double cross = 0.0;
        double head = 0.0;
        double tail = 0.0;
        for (std::size_t i = 0; i + lag < n; ++i) {
            cross += frame[i] * frame[i + lag];
            head += frame[i] * frame[i];
            tail += frame[i + lag] * frame[i + lag];
        }
        const double denom = std::sqrt(head * tail);
        r[lag] = denom > 0.0 ? cross / denom : 0.0;
    }

    double best = -1.0;
    for (std::size_t lag = min_lag; lag <= max_lag; ++lag) {
        best = std::max(best, r[lag]);
    }
    if (best <= 0.0) {
        return {};
    }
    std::size_t chosen = 0;
    for (std::size_t lag = min_lag; lag <= max_lag; ++lag) {
        if (r[lag] >= 0.9 * best && r[lag] >= r[lag - 1] && r[lag] >= r[lag + 1]) {
            chosen = lag;
            break;
        }
    }
    if (chosen == 0) {
        return {};
    }

    PitchEstimate estimate;
    estimate.voicing_prob = std::clamp(r[chosen], 0.0, 1.0);
    if (estimate.voicing_prob < options.voicing_threshold) {
        return {0.0, estimate.voicing_prob};
    }
    const double left = r[chosen - 1];
    const double mid = r[chosen];
    const double right = r[chosen + 1];
    const double curvature = left - 2.0 * mid + right;
    double offset = 0.0;
    if (curvature < 0.0) {
        offset = std::clamp(0.5 * (left - right) / curvature, -0.5, 0.5);
    }
    estimate.f0_hz = kSampleRate / (static_cast<double>(chosen) + offset);
    return estimate;
}

std::vector<double> delta(std::span<const double> contour) {
    const auto n = static_cast<std::ptrdiff_t>(contour.size());
    std::vector<double> out(contour.size(), 0.0);
    const auto at = [&](std::ptrdiff_t i) { return contour[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, n - 1))]; };
    for (std::ptrdiff_t t = 0; t < n; ++t) {
        double sum = 0.0;
        for (std::ptrdiff_t k = 1; k <= 2; ++k) {
            sum += static_cast<double>(k) * (at(t + k) - at(t - k));
        }
        out[static_cast<std::size_t>(t)] = sum / 10.0;
    }
    return out;
}

FunctionalSet apply_functionals(std::span<const double> contour) {
    const auto n = contour.size();
    if (n < 2) {
        throw ValidationError(fmt::format("functionals need at least 2 frames, got {}", n));
    }
    const double count = static_cast<double>(n);
    // First occurrence for both extremes (minmax_element reports the last maximum).
    const auto min_it = std::min_element(contour.begin(), contour.end());
    const auto max_it = std::max_element(contour.begin(), contour.end());
    FunctionalSet out{};
    out[functional::kMax] = *max_it;
    out[functional::kMin] = *min_it;
    out[functional::kRange] = *max_it - *min_it;
    out[functional::kMaxPos] = static_cast<double>(max_it - contour.begin()) / (count - 1.0);
    out[functional::kMinPos] = static_cast<double>(min_it - contour.begin()) / (count - 1.0);

    double sum = 0.0;
    for (const double y : contour) {
        sum += y;
    }
    const double mean = sum / count;
    out[functional::kMean] = mean;

    const double x_mean = (count - 1.0) / 2.0;
    double sxx = 0.0;
    double sxy = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = static_cast<double>(i) - x_mean;
        const double dy = contour[i] - mean;
        sxx += dx * dx;
        sxy += dx * dy;
        const double d2 = dy * dy;
        m2 += d2;
        m3 += d2 * dy;
        m4 += d2 * d2;
    }
    const double slope = sxy / sxx;
    const double offset = mean - slope * x_mean;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double residual = contour[i] - (offset + slope * static_cast<double>(i));
        sse += residual * residual;
    }
    out[functional::kSlope] = slope;
    out[functional::kOffset] = offset;
    out[functional::kRegressionMse] = sse / count;

    if (*max_it == *min_it) {
        out[functional::kStdDev] = 0.0;
        out[functional::kSkewness] = 0.0;
        out[functional::kKurtosis] = 0.0;
        return out;
    }
    m2 /= count;
    m3 /= count;
    m4 /= count;
    const double sd = std::sqrt(m2);
    out[functional::kStdDev] = sd;
    if (m2 > 0.0) {
        out[functional::kSkewness] = m3 / (m2 * sd);
        out[functional::kKurtosis] = m4 / (m2 * m2);
    }
    return out;
}

LldMatrix compute_lld(const AudioClip &clip, const AcousticOptions &options) {
    clip.validate();
    LldMatrix lld;
    lld.n_frames = frame_count(clip.samples.size());
    for (std::size_t c = 0; c < kLldCount; ++c) {
        lld.columns[c].resize(lld.n_frames);
    }
    const auto &window = hamming_window();
    MfccComputer mfcc;
    std::array<double, kFrameLength> windowed{};
    for (std::size_t f = 0; f < lld.n_frames; ++f) {
        const std::span<const double> raw(clip.samples.data() + f * kFrameHop, kFrameLength);
        for (std::size_t n = 0; n < kFrameLength; ++n) {
            windowed[n] = raw[n] * window[n];
        }
        lld.columns[lld::kEnergy][f] = rms_energy(raw);
        const auto ceps = mfcc.compute(windowed);
        for (std::size_t i = 0; i < kNumCeps; ++i) {
            lld.columns[lld::kMfccFirst + i][f] = ceps[i];
        }
        lld.columns[lld::kZcr][f] = zero_crossing_rate(raw);
        const auto pitch = f0_autocorr(windowed, options);
        lld.columns[lld::kVoicing][f] = pitch.voicing_prob;
        lld.columns[lld::kF0][f] = pitch.f0_hz;
    }
    for (std::size_t c = 0; c < kLldCount; ++c) {
        lld.columns[kLldCount + c] = delta(lld.columns[c]);
    }
    return lld;
}

const FeatureNames &is09_feature_names() {
    static const FeatureNames names = [] {
        std::vector<std::string> lld_names{"rms_energy"};
        for (std::size_t i = 1; i <= kNumCeps; ++i) {
            lld_names.push_back(fmt::format("mfcc{}", i));
        }
        lld_names.insert(lld_names.end(), {"zcr", "voice_prob", "f0"});
        const std::array<const char *, kFunctionalCount> functionals{
            "max", "min", "range", "maxPos", "minPos", "amean",
            "linregc1", "linregc2", "linregerrQ", "stddev", "skewness", "kurtosis"};
        std::vector<std::string> out;
        out.reserve(kIs09Dim);
        for (const char *suffix : {"", "_de"}) {
            for (const auto &lld_name : lld_names) {
                for (const char *f : functionals) {
                    out.push_back(fmt::format("{}{}_{}", lld_name, suffix, f));
                }
            }
        }
        return std::make_shared<const std::vector<std::string>>(std::move(out));
    }();
    return names;
}

FeatureBlock is09_block(const AudioClip &clip, const AcousticOptions &options) {
    const auto lld = compute_lld(clip, options);
    std::vector<double> values;
    values.reserve(kIs09Dim);
    for (const auto &column : lld.columns) {
        const auto stats = apply_functionals(column);
        values.insert(values.end(), stats.begin(), stats.end());
    }
    return make_dense_block(BlockKind::Acoustic, is09_feature_names(), std::move(values));
}

}  // namespace misinfo
