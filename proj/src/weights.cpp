#include "ainp/weights.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "ainp/errors.hpp"

namespace ainp {

namespace {

// Per-frame reliable/total energy ratios for undeformed atoms. The numerator
// accumulates the same terms in the same order as the denominator, so a frame
// whose support is fully reliable yields num == den bit for bit and the ratio
// is exactly 1.0; a fully unreliable frame yields exactly 0.0.
std::vector<double> frame_ratios(const GaborFrame& frame,
                                 const ReliabilityMask& mask) {
  const auto& w = frame.window();
  const std::size_t len = frame.signal_len();
  const std::size_t frames = frame.num_frames();
  std::vector<double> ratio(frames);
  for (std::size_t n = 0; n < frames; ++n) {
    const std::ptrdiff_t base =
        static_cast<std::ptrdiff_t>(n * frame.hop()) - frame.window_offset();
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      const std::size_t l =
          detail::wrap_index(base + static_cast<std::ptrdiff_t>(k), len);
      const double e = w[k] * w[k];
      den += e;
      if (mask.is_reliable(l)) num += e;
    }
    if (den == 0.0)
      throw NotAFrameError("energy weights: window has no energy");
    ratio[n] = num / den;
  }
  return ratio;
}

bool frame_is_clean(const GaborFrame& frame, const ReliabilityMask& mask,
                    std::size_t n) {
  const auto& w = frame.window();
  const std::size_t len = frame.signal_len();
  const std::ptrdiff_t base =
      static_cast<std::ptrdiff_t>(n * frame.hop()) - frame.window_offset();
  for (std::size_t k = 0; k < w.size(); ++k) {
    const std::size_t l =
        detail::wrap_index(base + static_cast<std::ptrdiff_t>(k), len);
    if (!mask.is_reliable(l)) return false;
  }
  return true;
}

}  // namespace

WeightVector energy_weights(const GaborFrame& frame,
                            const ReliabilityMask& mask) {
  if (mask.size() != frame.signal_len())
    throw std::invalid_argument("energy weights: mask length mismatch");
  const std::size_t frames = frame.num_frames();
  const std::vector<double> ratio = frame_ratios(frame, mask);
  WeightVector out;
  out.values.resize(frame.num_coeffs());
  for (std::size_t m = 0; m < frame.num_bins(); ++m)
    for (std::size_t n = 0; n < frames; ++n)
      out.values[n + m * frames] = ratio[n];
  return out;
}

WeightVector learned_energy_weights(const GaborFrame& frame,
                                    const ReliabilityMask& mask,
                                    const Deformation& d) {
  if (mask.size() != frame.signal_len())
    throw std::invalid_argument("learned weights: mask length mismatch");
  if (d.dim() != frame.num_bins())
    throw std::invalid_argument("learned weights: deformation dimension mismatch");

  const auto& w = frame.window();
  const std::size_t len = frame.signal_len();
  const std::size_t frames = frame.num_frames();
  const std::size_t bins = frame.num_bins();
  const std::size_t mods = frame.modulations();
  const int band = d.band();

  WeightVector out;
  out.values.resize(frame.num_coeffs());

  // Unit roots e^{i 2 pi r / M}; modulation phases reduce to integer indices.
  std::vector<cplx> roots(mods);
  for (std::size_t r = 0; r < mods; ++r)
    roots[r] = std::polar(1.0, 2.0 * std::numbers::pi *
                                   static_cast<double>(r) /
                                   static_cast<double>(mods));

  const std::vector<double> plain = frame_ratios(frame, mask);

  std::vector<std::size_t> pos(w.size());
  std::vector<char> rel(w.size());
  for (std::size_t n = 0; n < frames; ++n) {
    if (frame_is_clean(frame, mask, n)) {
      // Deformed atoms are linear combinations of same-frame atoms, so their
      // support is the frame support; a clean frame gives weight exactly 1.
      for (std::size_t m = 0; m < bins; ++m) out.values[n + m * frames] = 1.0;
      continue;
    }
    const std::ptrdiff_t base =
        static_cast<std::ptrdiff_t>(n * frame.hop()) - frame.window_offset();
    for (std::size_t k = 0; k < w.size(); ++k) {
      pos[k] = detail::wrap_index(base + static_cast<std::ptrdiff_t>(k), len);
      rel[k] = mask.is_reliable(pos[k]) ? 1 : 0;
    }
    for (std::size_t m = 0; m < bins; ++m) {
      if (d.row_is_identity(m)) {
        out.values[n + m * frames] = plain[n];
        continue;
      }
      const std::size_t j_lo = m > static_cast<std::size_t>(band)
                                   ? m - static_cast<std::size_t>(band)
                                   : 0;
      const std::size_t j_hi =
          std::min(bins - 1, m + static_cast<std::size_t>(band));
      double num = 0.0;
      double den = 0.0;
      for (std::size_t k = 0; k < w.size(); ++k) {
        const std::size_t l = pos[k];
        cplx v(0.0, 0.0);
        for (std::size_t j = j_lo; j <= j_hi; ++j) {
          const cplx coef = std::conj(d.matrix()(m, j));
          if (coef == 0.0) continue;
          v += coef * roots[(j * l) % mods];
        }
        const double e = w[k] * w[k] * std::norm(v);
        den += e;
        if (rel[k]) num += e;
      }
      out.values[n + m * frames] = den > 0.0 ? num / den : 0.0;
    }
  }
  return out;
}

}  // namespace ainp
