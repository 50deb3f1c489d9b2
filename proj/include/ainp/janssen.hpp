#pragma once

#include <cstddef>
#include <vector>

#include "ainp/mask.hpp"
#include "ainp/signal.hpp"

namespace ainp {

struct JanssenConfig {
  /// Analysis frame length centered on each gap.
  std::size_t window_len = 2800;
  /// Unused by the centered-frame placement; kept for config parity.
  std::size_t hop = 700;
  int iterations = 50;
};

struct JanssenDiagnostics {
  Signal restored;
  /// Per gap, the zero-padded prediction-error energy after each iteration.
  /// Both alternation steps minimize this same quadratic form, so each trace
  /// is non-increasing.
  std::vector<std::vector<double>> residual_traces;
};

/// Autoregressive interpolation: alternately fits AR coefficients to the
/// frame around a gap (Levinson-Durbin on the biased autocorrelation) and
/// solves the least-squares system for the missing samples. Gaps are
/// processed left to right; a gap of window_len / 2 samples or more throws
/// GapTooLongError. Reliable samples pass through untouched.
Signal janssen_inpaint(const Signal& x, const ReliabilityMask& mask,
                       const JanssenConfig& cfg = {});

JanssenDiagnostics janssen_inpaint_traced(const Signal& x,
                                          const ReliabilityMask& mask,
                                          const JanssenConfig& cfg = {});

}  // namespace ainp
