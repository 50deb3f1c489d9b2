#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "ainp/signal.hpp"

namespace ainp {

using cplx = std::complex<double>;

/// Periodic (DFT-even) Hann window: w[k] = 0.5 - 0.5 cos(2 pi k / length).
/// The peak sits at k = length/2; GaborFrame shifts the window circularly so
/// that this peak lands on the frame's time index.
std::vector<double> make_hann_window(std::size_t length);

namespace detail {
class FftPlan;
}

/// Gabor system on C^L with atoms g_p[l] = g[(l - n a) mod L] e^{i 2 pi m l / M}
/// and combined index p = n + m N, where n < N = L/a counts time frames and
/// m < M' = floor(M/2) + 1 counts the retained bins of the real transform.
/// Window indexing is circular and the support is centred on l = n a.
class GaborFrame {
 public:
  /// window: short window, support length w_g <= M (painless case);
  /// hop: time shift a; modulations: M; signal_len: L.
  /// Requires a | L and M | L, all dimensions positive.
  GaborFrame(std::vector<double> window, std::size_t hop,
             std::size_t modulations, std::size_t signal_len);

  std::size_t hop() const { return hop_; }
  std::size_t modulations() const { return mods_; }
  std::size_t signal_len() const { return len_; }
  std::size_t num_frames() const { return len_ / hop_; }
  std::size_t num_bins() const { return mods_ / 2 + 1; }
  std::size_t num_coeffs() const { return num_frames() * num_bins(); }
  bool has_nyquist_bin() const { return mods_ % 2 == 0; }

  const std::vector<double>& window() const { return window_; }
  /// Window tap k of time frame n sits at sample (n a - offset + k) mod L.
  std::ptrdiff_t window_offset() const { return offset_; }

  /// True when the window overlap sum is 1 everywhere (within 1e-12), i.e.
  /// synthesize exactly inverts analyze.
  bool is_tight() const { return tight_; }
  /// Largest eigenvalue of synthesize-after-analyze: max_l sum_n g[l - n a]^2.
  double frame_bound() const { return frame_bound_; }

  const detail::FftPlan& plan() const { return *plan_; }

 private:
  std::vector<double> window_;
  std::size_t hop_;
  std::size_t mods_;
  std::size_t len_;
  std::ptrdiff_t offset_ = 0;
  bool tight_ = false;
  double frame_bound_ = 0.0;
  std::shared_ptr<const detail::FftPlan> plan_;
};

/// Half-spectrum Gabor coefficients in layout values[n + m N]: bin m is the
/// contiguous slice [m N, (m+1) N). Carries the producing frame's geometry.
struct CoefficientGrid {
  std::vector<cplx> values;
  std::size_t num_frames = 0;
  std::size_t num_bins = 0;
  int sample_rate = 44100;

  std::size_t size() const { return values.size(); }
  cplx& at(std::size_t m, std::size_t n) { return values[n + m * num_frames]; }
  const cplx& at(std::size_t m, std::size_t n) const {
    return values[n + m * num_frames];
  }
};

/// Rescales the window to g[l] / sqrt(sum_n g[(l - n a) mod L]^2) so the
/// overlap sum becomes exactly 1 (Parseval normalization; synthesize then
/// inverts analyze and the analysis operator has unit norm). Idempotent.
/// Throws NotAFrameError when the overlap sum vanishes somewhere and
/// std::invalid_argument when a > w_g (painless-case precondition).
GaborFrame make_tight(const GaborFrame& frame);

/// c_{n+mN} = sum_l g[(l - n a) mod L] e^{-i 2 pi m l / M} x[l] for m < M'.
/// Computed frame-wise: fold the windowed segment modulo M, then one
/// length-M real FFT per frame.
CoefficientGrid analyze(const GaborFrame& frame, const Signal& x);

/// Real synthesis: applies the full-spectrum synthesis operator, scaled by
/// 1/M, to the conjugate-symmetric extension of the half grid (bins 1..M'-2
/// for even M, 1..M'-1 for odd M, count twice; imaginary parts of the DC and
/// Nyquist bins do not contribute). For tight frames synthesize(analyze(x))
/// reproduces x.
Signal synthesize(const GaborFrame& frame, const CoefficientGrid& grid);

/// Atom p = n + m N as a dense length-L complex vector.
std::vector<cplx> atom(const GaborFrame& frame, std::size_t p);

namespace detail {
/// Raw-buffer transforms used by the solver; x has length L, c length N*M'.
void analyze_into(const GaborFrame& frame, const double* x, cplx* c);
void synthesize_into(const GaborFrame& frame, const cplx* c, double* out);
std::size_t wrap_index(std::ptrdiff_t v, std::size_t modulus);
}  // namespace detail

}  // namespace ainp
