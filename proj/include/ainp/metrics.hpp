#pragma once

#include <vector>

#include "ainp/mask.hpp"
#include "ainp/signal.hpp"

namespace ainp {

/// 10 log10(||ref||^2 / ||ref - est||^2). Exact match returns +infinity;
/// an identically zero reference throws UndefinedReferenceError.
double sdr(const std::vector<double>& ref, const std::vector<double>& est);

struct SdrReport {
  /// One value per gap run, in mask order (left to right).
  std::vector<double> per_gap;
  /// SDR over all unreliable samples pooled together.
  double overall_db = 0.0;
};

/// SDR restricted to the unreliable samples of the mask, per gap and pooled.
SdrReport sdr_on_gaps(const Signal& ref, const Signal& est,
                      const ReliabilityMask& mask);

}  // namespace ainp
