#pragma once

#include <cstdint>
#include <string>

#include "ainp/mask.hpp"
#include "ainp/signal.hpp"

namespace ainp {

struct WavData {
  Signal signal;
  int num_channels = 1;
  int bit_depth = 32;
  /// 1 = integer PCM, 3 = IEEE float.
  std::uint16_t format_code = 3;
};

/// Reads a RIFF/WAVE file. Supports PCM16, PCM24 and float32 (plain or
/// extensible); integer samples map to [-1, 1) by dividing by 2^(bits-1).
/// Multichannel input keeps the first channel and warns on stderr.
WavData read_wav(const std::string& path);

enum class WavFormat { kFloat32, kPcm16 };

/// Writes a mono WAVE file; float32 by default. PCM16 rounds to nearest
/// (half away from zero) after scaling by 2^15, saturating at the range ends.
void write_wav(const std::string& path, const Signal& signal,
               WavFormat format = WavFormat::kFloat32);

struct DegradeResult {
  Signal degraded;
  GapSpec gaps;
};

/// Zeroes num_gaps non-overlapping gaps of round(gap_ms * fs / 1000) samples
/// at uniformly drawn positions, keeping guard_ms of clean signal between
/// gaps and at both signal ends. Placement is rejection sampling on a
/// std::mt19937_64 seeded with `seed`, so results are reproducible across
/// platforms. Throws PlacementError when the constraints cannot be met.
DegradeResult degrade(const Signal& x, double gap_ms, int num_gaps,
                      std::uint64_t seed, double guard_ms = 200.0);

}  // namespace ainp
