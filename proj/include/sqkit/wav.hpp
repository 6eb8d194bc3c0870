#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <string>
#include <vector>

#include "sqkit/errors.hpp"
#include "sqkit/signal.hpp"

namespace sqkit {

namespace wav_detail {

inline std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

inline std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

inline void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 16) & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 24) & 0xFF));
}

inline void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xFF));
}

inline void put_tag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

}  // namespace wav_detail

/// Reads a RIFF/WAVE stream: PCM 16/24/32-bit integer or 32-bit float, any
/// channel count. Multichannel content is downmixed to mono by the per-sample
/// arithmetic mean; integer samples are scaled to [-1, 1) by 2^(bits-1).
inline Signal read_wav(std::istream& in) {
  using namespace wav_detail;

  std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>()};
  if (bytes.size() < 12) throw FormatError("wav: file too short for a RIFF header");
  if (std::memcmp(bytes.data(), "RIFF", 4) != 0 || std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw FormatError("wav: not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
  const unsigned char* data = nullptr;
  std::size_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* tag = reinterpret_cast<const char*>(bytes.data() + pos);
    const std::uint32_t chunk_len = read_u32(bytes.data() + pos + 4);
    pos += 8;
    if (pos + chunk_len > bytes.size()) throw FormatError("wav: chunk extends past end of file");

    if (std::memcmp(tag, "fmt ", 4) == 0) {
      if (chunk_len < 16) throw FormatError("wav: fmt chunk too short");
      const unsigned char* f = bytes.data() + pos;
      format = read_u16(f);
      channels = read_u16(f + 2);
      sample_rate = read_u32(f + 4);
      bits = read_u16(f + 14);
      if (format == kFormatExtensible) {
        if (chunk_len < 40) throw FormatError("wav: extensible fmt chunk too short");
        format = read_u16(f + 24);  // first two bytes of the SubFormat GUID
      }
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      data = bytes.data() + pos;
      data_len = chunk_len;
    }
    pos += chunk_len + (chunk_len & 1);  // chunks are word-aligned
  }

  if (!have_fmt) throw FormatError("wav: missing fmt chunk");
  if (data == nullptr) throw FormatError("wav: missing data chunk");
  if (channels == 0) throw FormatError("wav: zero channels");

  const bool is_float = format == kFormatFloat;
  if (format != kFormatPcm && !is_float) {
    throw UnsupportedError("wav: unsupported codec (format tag " + std::to_string(format) + ")");
  }
  if (is_float && bits != 32) {
    throw UnsupportedError("wav: only 32-bit float is supported, got " + std::to_string(bits));
  }
  if (!is_float && bits != 16 && bits != 24 && bits != 32) {
    throw UnsupportedError("wav: unsupported PCM depth " + std::to_string(bits) + " bits");
  }
  if (sample_rate < static_cast<std::uint32_t>(kMinSampleRate)) {
    throw UnsupportedError("wav: sample rate " + std::to_string(sample_rate) + " below 8000 Hz");
  }

  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t frame_size = bytes_per_sample * channels;
  if (frame_size == 0 || data_len % frame_size != 0) {
    throw FormatError("wav: data chunk is not a whole number of frames");
  }
  const std::size_t frames = data_len / frame_size;

  Signal out;
  out.sample_rate = static_cast<int>(sample_rate);
  out.samples.resize(frames);

  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const unsigned char* p = data + i * frame_size + c * bytes_per_sample;
      double v = 0.0;
      if (is_float) {
        float f;
        std::memcpy(&f, p, 4);
        v = static_cast<double>(f);
      } else if (bits == 16) {
        const std::int16_t s = static_cast<std::int16_t>(p[0] | p[1] << 8);
        v = static_cast<double>(s) / 32768.0;
      } else if (bits == 24) {
        std::int32_t s = p[0] | p[1] << 8 | p[2] << 16;
        if (s & 0x800000) s |= ~0xFFFFFF;  // sign extend
        v = static_cast<double>(s) / 8388608.0;
      } else {
        const std::int32_t s =
            static_cast<std::int32_t>(read_u32(p));
        v = static_cast<double>(s) / 2147483648.0;
      }
      acc += v;
    }
    out.samples[i] = acc / static_cast<double>(channels);
  }
  return out;
}

inline Signal read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("wav: cannot open '" + path + "' for reading");
  return read_wav(in);
}

/// Writes a mono 32-bit float little-endian WAV. read_wav(write_wav(s))
/// reproduces samples bit-exactly when they are float32-representable.
inline void write_wav(const Signal& signal, const std::string& path) {
  using namespace wav_detail;
  if (signal.samples.empty()) throw ParamError("write_wav: empty sample sequence");
  if (signal.sample_rate <= 0) throw ParamError("write_wav: sample_rate must be positive");
  for (double v : signal.samples) {
    if (!std::isfinite(v)) throw ParamError("write_wav: non-finite sample");
  }

  const std::uint32_t n = static_cast<std::uint32_t>(signal.samples.size());
  const std::uint32_t data_len = n * 4;

  std::vector<unsigned char> out;
  out.reserve(58 + data_len);
  put_tag(out, "RIFF");
  put_u32(out, 4 + 8 + 16 + 8 + 4 + 8 + data_len);  // WAVE + fmt + fact + data
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, kFormatFloat);
  put_u16(out, 1);  // mono
  put_u32(out, static_cast<std::uint32_t>(signal.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(signal.sample_rate) * 4);
  put_u16(out, 4);
  put_u16(out, 32);
  put_tag(out, "fact");
  put_u32(out, 4);
  put_u32(out, n);
  put_tag(out, "data");
  put_u32(out, data_len);
  for (double v : signal.samples) {
    const float f = static_cast<float>(v);
    std::uint32_t u;
    std::memcpy(&u, &f, 4);
    put_u32(out, u);
  }

  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("wav: cannot open '" + path + "' for writing");
  os.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!os) throw IoError("wav: write to '" + path + "' failed");
}

}  // namespace sqkit
