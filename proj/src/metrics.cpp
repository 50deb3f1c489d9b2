#include "ainp/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ainp/errors.hpp"

namespace ainp {

double sdr(const std::vector<double>& ref, const std::vector<double>& est) {
  if (ref.size() != est.size())
    throw std::invalid_argument("sdr: length mismatch");
  if (ref.empty()) throw std::invalid_argument("sdr: empty input");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    num += ref[i] * ref[i];
    const double d = ref[i] - est[i];
    den += d * d;
  }
  if (num == 0.0)
    throw UndefinedReferenceError("sdr: reference is identically zero");
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(num / den);
}

SdrReport sdr_on_gaps(const Signal& ref, const Signal& est,
                      const ReliabilityMask& mask) {
  if (ref.size() != est.size() || ref.size() != mask.size())
    throw std::invalid_argument("sdr_on_gaps: length mismatch");
  const auto runs = mask.gap_runs();
  if (runs.empty())
    throw std::invalid_argument("sdr_on_gaps: mask has no gaps");
  SdrReport report;
  std::vector<double> all_ref, all_est;
  for (const auto& [start, len] : runs) {
    std::vector<double> r(ref.samples.begin() + static_cast<std::ptrdiff_t>(start),
                          ref.samples.begin() + static_cast<std::ptrdiff_t>(start + len));
    std::vector<double> e(est.samples.begin() + static_cast<std::ptrdiff_t>(start),
                          est.samples.begin() + static_cast<std::ptrdiff_t>(start + len));
    report.per_gap.push_back(sdr(r, e));
    all_ref.insert(all_ref.end(), r.begin(), r.end());
    all_est.insert(all_est.end(), e.begin(), e.end());
  }
  report.overall_db = sdr(all_ref, all_est);
  return report;
}

}  // namespace ainp
