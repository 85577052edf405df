#include "misinfo/audio.hpp"

#include "misinfo/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string_view>

namespace misinfo {

namespace {

constexpr std::size_t kMinSamples = 400;
constexpr std::string_view kResampleHint =
    "expected 16-bit PCM mono WAV at 16000 Hz; convert with e.g. 'ffmpeg -i in -ac 1 -ar 16000 -sample_fmt s16 out.wav'";

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t at) {
    return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
           (static_cast<std::uint32_t>(b[at + 2]) << 16) | (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t at) {
    return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t at, std::string_view tag) {
    return std::equal(tag.begin(), tag.end(), b.begin() + static_cast<std::ptrdiff_t>(at),
                      [](char c, std::uint8_t u) { return static_cast<std::uint8_t>(c) == u; });
}

void put_u32(std::vector<std::uint8_t> &out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFFu));
    }
}

void put_u16(std::vector<std::uint8_t> &out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFFu));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_tag(std::vector<std::uint8_t> &out, std::string_view tag) { out.insert(out.end(), tag.begin(), tag.end()); }

}  // namespace

void AudioClip::validate() const {
    if (sample_rate != kSampleRate) {
        throw ValidationError(fmt::format("sample rate {} Hz; {}", sample_rate, kResampleHint));
    }
    if (samples.size() < kMinSamples) {
        throw ValidationError(fmt::format("clip has {} samples, shorter than one 400-sample frame", samples.size()));
    }
}

AudioClip decode_wav(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 12 || !tag_is(bytes, 0, "RIFF") || !tag_is(bytes, 8, "WAVE")) {
        throw ValidationError(fmt::format("not a RIFF/WAVE file; {}", kResampleHint));
    }
    std::size_t at = 12;
    bool have_format = false;
    std::uint16_t channels = 0;
    std::uint16_t bits = 0;
    std::uint32_t rate = 0;
    while (at + 8 <= bytes.size()) {
        const auto size = read_u32(bytes, at + 4);
        const auto body = at + 8;
        if (body + size > bytes.size()) {
            throw ValidationError("truncated WAV chunk");
        }
        if (tag_is(bytes, at, "fmt ")) {
            if (size < 16) {
                throw ValidationError("WAV fmt chunk too short");
            }
            auto format = read_u16(bytes, body);
            channels = read_u16(bytes, body + 2);
            rate = read_u32(bytes, body + 4);
            bits = read_u16(bytes, body + 14);
            if (format == 0xFFFE && size >= 26) {
                format = read_u16(bytes, body + 24);  // WAVE_FORMAT_EXTENSIBLE subformat
            }
            if (format != 1 || channels != 1 || rate != kSampleRate || bits != 16) {
                throw ValidationError(fmt::format("WAV is format {} with {} channel(s), {} Hz, {} bit; {}", format,
                                                  channels, rate, bits, kResampleHint));
            }
            have_format = true;
        } else if (tag_is(bytes, at, "data")) {
            if (!have_format) {
                throw ValidationError("WAV data chunk precedes fmt chunk");
            }
            AudioClip clip;
            clip.sample_rate = static_cast<int>(rate);
            clip.samples.reserve(size / 2);
            for (std::size_t i = 0; i + 1 < size; i += 2) {
                const auto raw = static_cast<std::int16_t>(read_u16(bytes, body + i));
                clip.samples.push_back(static_cast<double>(raw) / 32768.0);
            }
            return clip;
        }
        at = body + size + (size & 1u);
    }
    throw ValidationError("WAV has no data chunk");
}

AudioClip read_wav(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(fmt::format("cannot open audio '{}'", path.string()));
    }
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return decode_wav(bytes);
    } catch (const ValidationError &e) {
        throw ValidationError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

std::vector<std::uint8_t> encode_wav(const AudioClip &clip) {
    const auto data_bytes = static_cast<std::uint32_t>(clip.samples.size() * 2);
    std::vector<std::uint8_t> out;
    out.reserve(44 + data_bytes);
    put_tag(out, "RIFF");
    put_u32(out, 36 + data_bytes);
    put_tag(out, "WAVE");
    put_tag(out, "fmt ");
    put_u32(out, 16);
    put_u16(out, 1);
    put_u16(out, 1);
    put_u32(out, static_cast<std::uint32_t>(clip.sample_rate));
    put_u32(out, static_cast<std::uint32_t>(clip.sample_rate) * 2);
    put_u16(out, 2);
    put_u16(out, 16);
    put_tag(out, "data");
    put_u32(out, data_bytes);
    for (const double s : clip.samples) {
        const auto scaled = std::lround(std::clamp(s, -1.0, 1.0) * 32767.0);
        put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
    }
    return out;
}

void write_wav(const std::filesystem::path &path, const AudioClip &clip) {
    const auto bytes = encode_wav(clip);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(fmt::format("cannot write '{}'", path.string()));
    }
    out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace misinfo
