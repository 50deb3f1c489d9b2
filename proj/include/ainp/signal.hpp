#pragma once

#include <cstddef>
#include <vector>

namespace ainp {

/// Mono audio buffer. Samples are nominally in [-1, 1] but no range is
/// enforced; all processing runs in double precision.
struct Signal {
  std::vector<double> samples;
  int sample_rate = 44100;

  std::size_t size() const { return samples.size(); }
};

}  // namespace ainp
