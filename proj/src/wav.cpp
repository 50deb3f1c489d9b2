#include "ainp/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <random>
#include <vector>

#include "ainp/errors.hpp"

namespace ainp {

namespace {

std::uint32_t rd_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t rd_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(static_cast<std::uint16_t>(p[0]) |
                                    (static_cast<std::uint16_t>(p[1]) << 8));
}

void wr_u32(std::ofstream& f, std::uint32_t v) {
  const unsigned char b[4] = {
      static_cast<unsigned char>(v & 0xff),
      static_cast<unsigned char>((v >> 8) & 0xff),
      static_cast<unsigned char>((v >> 16) & 0xff),
      static_cast<unsigned char>((v >> 24) & 0xff)};
  f.write(reinterpret_cast<const char*>(b), 4);
}

void wr_u16(std::ofstream& f, std::uint16_t v) {
  const unsigned char b[2] = {static_cast<unsigned char>(v & 0xff),
                              static_cast<unsigned char>((v >> 8) & 0xff)};
  f.write(reinterpret_cast<const char*>(b), 2);
}

float bits_to_float(std::uint32_t bits) {
  float out;
  std::memcpy(&out, &bits, sizeof(out));
  return out;
}

std::uint32_t float_to_bits(float v) {
  std::uint32_t out;
  std::memcpy(&out, &v, sizeof(out));
  return out;
}

}  // namespace

WavData read_wav(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(f)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw IoError("not a RIFF/WAVE file: " + path);

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
    const std::uint32_t size = rd_u32(bytes.data() + pos + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size())
      throw IoError("truncated chunk in: " + path);
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (size < 16) throw IoError("malformed fmt chunk in: " + path);
      format = rd_u16(bytes.data() + body);
      channels = rd_u16(bytes.data() + body + 2);
      rate = rd_u32(bytes.data() + body + 4);
      bits = rd_u16(bytes.data() + body + 14);
      if (format == 0xfffe) {
        // WAVE_FORMAT_EXTENSIBLE: the real code leads the GUID.
        if (size < 40) throw IoError("malformed extensible fmt in: " + path);
        format = rd_u16(bytes.data() + body + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data = bytes.data() + body;
      data_len = size;
    }
    pos = body + size + (size & 1);  // chunks are word-aligned
  }
  if (!have_fmt) throw IoError("missing fmt chunk in: " + path);
  if (data == nullptr) throw IoError("missing data chunk in: " + path);
  if (channels == 0) throw IoError("zero channels in: " + path);

  const bool pcm16 = format == 1 && bits == 16;
  const bool pcm24 = format == 1 && bits == 24;
  const bool f32 = format == 3 && bits == 32;
  if (!pcm16 && !pcm24 && !f32)
    throw IoError("unsupported WAVE encoding (format " + std::to_string(format) +
                  ", " + std::to_string(bits) + " bit) in: " + path);

  const std::size_t bytes_per = static_cast<std::size_t>(bits) / 8;
  const std::size_t stride = bytes_per * channels;
  const std::size_t num = stride == 0 ? 0 : data_len / stride;
  if (channels > 1)
    std::cerr << "warning: " << path << " has " << channels
              << " channels; using the first\n";

  WavData out;
  out.num_channels = channels;
  out.bit_depth = bits;
  out.format_code = format;
  out.signal.sample_rate = static_cast<int>(rate);
  out.signal.samples.resize(num);
  for (std::size_t i = 0; i < num; ++i) {
    const unsigned char* p = data + i * stride;
    double v = 0.0;
    if (pcm16) {
      const auto raw = static_cast<std::int16_t>(rd_u16(p));
      v = static_cast<double>(raw) / 32768.0;
    } else if (pcm24) {
      std::int32_t raw = static_cast<std::int32_t>(p[0]) |
                         (static_cast<std::int32_t>(p[1]) << 8) |
                         (static_cast<std::int32_t>(p[2]) << 16);
      if (raw & 0x800000) raw -= 0x1000000;
      v = static_cast<double>(raw) / 8388608.0;
    } else {
      v = static_cast<double>(bits_to_float(rd_u32(p)));
    }
    out.signal.samples[i] = v;
  }
  return out;
}

void write_wav(const std::string& path, const Signal& signal,
               WavFormat format) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path);
  const bool f32 = format == WavFormat::kFloat32;
  const std::uint16_t bits = f32 ? 32 : 16;
  const std::uint16_t code = f32 ? 3 : 1;
  const std::uint32_t rate = static_cast<std::uint32_t>(signal.sample_rate);
  const std::uint32_t bytes_per = bits / 8;
  const auto n = static_cast<std::uint32_t>(signal.size());
  const std::uint32_t data_size = n * bytes_per;
  const std::uint32_t fmt_size = 16;

  f.write("RIFF", 4);
  wr_u32(f, 4 + 8 + fmt_size + 8 + data_size);
  f.write("WAVE", 4);
  f.write("fmt ", 4);
  wr_u32(f, fmt_size);
  wr_u16(f, code);
  wr_u16(f, 1);  // mono
  wr_u32(f, rate);
  wr_u32(f, rate * bytes_per);
  wr_u16(f, static_cast<std::uint16_t>(bytes_per));
  wr_u16(f, bits);
  f.write("data", 4);
  wr_u32(f, data_size);
  for (double s : signal.samples) {
    if (f32) {
      wr_u32(f, float_to_bits(static_cast<float>(s)));
    } else {
      const long long r = std::llround(s * 32768.0);
      const auto v = static_cast<std::int16_t>(
          std::clamp<long long>(r, -32768, 32767));
      wr_u16(f, static_cast<std::uint16_t>(v));
    }
  }
  if (!f) throw IoError("write failed: " + path);
}

DegradeResult degrade(const Signal& x, double gap_ms, int num_gaps,
                      std::uint64_t seed, double guard_ms) {
  if (num_gaps < 0) throw std::invalid_argument("degrade: negative gap count");
  if (!(gap_ms >= 0.0))
    throw std::invalid_argument("degrade: negative gap length");
  if (!(guard_ms >= 0.0))
    throw std::invalid_argument("degrade: negative guard");
  if (x.sample_rate <= 0)
    throw std::invalid_argument("degrade: nonpositive sample rate");
  const double fs = static_cast<double>(x.sample_rate);
  const auto glen = static_cast<std::size_t>(
      std::floor(gap_ms * fs / 1000.0 + 0.5));
  if (num_gaps > 0 && glen == 0)
    throw std::invalid_argument("degrade: gap length rounds to zero samples");
  const auto guard = static_cast<std::size_t>(
      std::floor(guard_ms * fs / 1000.0 + 0.5));
  const std::size_t len = x.size();

  DegradeResult out;
  out.degraded = x;
  out.gaps.signal_len = len;
  out.gaps.sample_rate = x.sample_rate;
  if (num_gaps == 0) return out;

  if (len < 2 * guard + glen)
    throw PlacementError("degrade: signal too short for one gap with guards");
  const std::size_t lo = guard;
  const std::size_t hi = len - guard - glen;  // inclusive last start

  std::mt19937_64 rng(seed);
  std::vector<std::pair<std::size_t, std::size_t>> placed;  // [start, end)
  const int max_attempts = 10000 * num_gaps;
  int attempts = 0;
  while (placed.size() < static_cast<std::size_t>(num_gaps)) {
    if (++attempts > max_attempts)
      throw PlacementError("degrade: could not place " +
                           std::to_string(num_gaps) + " gaps after " +
                           std::to_string(max_attempts) + " attempts");
    const std::size_t span = hi - lo + 1;
    const std::size_t start = lo + static_cast<std::size_t>(rng() % span);
    const std::size_t end = start + glen;
    bool ok = true;
    for (const auto& [ps, pe] : placed) {
      // Keep at least `guard` clean samples between gap edges.
      if (!(start >= pe + guard || ps >= end + guard)) {
        ok = false;
        break;
      }
    }
    if (ok) placed.emplace_back(start, end);
  }
  std::sort(placed.begin(), placed.end());
  for (const auto& [ps, pe] : placed) {
    out.gaps.gaps.push_back({ps, pe - ps});
    std::fill(out.degraded.samples.begin() + static_cast<std::ptrdiff_t>(ps),
              out.degraded.samples.begin() + static_cast<std::ptrdiff_t>(pe),
              0.0);
  }
  out.gaps.validate();
  return out;
}

}  // namespace ainp
