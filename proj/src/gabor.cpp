#include "ainp/gabor.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "ainp/errors.hpp"

namespace ainp {

namespace detail {

namespace {
// FFTW's planner is not thread-safe; execution through the new-array API is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

/// One forward (r2c) and one inverse (c2r) length-M plan, created once per
/// frame and executed on caller-provided buffers. FFTW_UNALIGNED keeps the
/// plans valid for arbitrary arrays; FFTW_ESTIMATE keeps planning
/// deterministic.
class FftPlan {
 public:
  explicit FftPlan(std::size_t m) : m_(m) {
    std::vector<double> re(m);
    std::vector<cplx> co(m / 2 + 1);
    std::lock_guard<std::mutex> lock(planner_mutex());
    r2c_ = fftw_plan_dft_r2c_1d(static_cast<int>(m), re.data(),
                                reinterpret_cast<fftw_complex*>(co.data()),
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    c2r_ = fftw_plan_dft_c2r_1d(static_cast<int>(m),
                                reinterpret_cast<fftw_complex*>(co.data()),
                                re.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (r2c_ == nullptr || c2r_ == nullptr) {
      throw std::runtime_error("gabor: FFT plan creation failed");
    }
  }

  ~FftPlan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(r2c_);
    fftw_destroy_plan(c2r_);
  }

  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  std::size_t size() const { return m_; }

  // out[m] = sum_r in[r] e^{-i 2 pi m r / M}, m <= M/2.
  void forward(double* in, cplx* out) const {
    fftw_execute_dft_r2c(r2c_, in, reinterpret_cast<fftw_complex*>(out));
  }

  // out[r] = sum over the Hermitian extension of in, unnormalized; in is
  // clobbered (FFTW c2r semantics).
  void inverse(cplx* in, double* out) const {
    fftw_execute_dft_c2r(c2r_, reinterpret_cast<fftw_complex*>(in), out);
  }

 private:
  std::size_t m_;
  fftw_plan r2c_;
  fftw_plan c2r_;
};

std::size_t wrap_index(std::ptrdiff_t v, std::size_t modulus) {
  const auto m = static_cast<std::ptrdiff_t>(modulus);
  std::ptrdiff_t r = v % m;
  if (r < 0) r += m;
  return static_cast<std::size_t>(r);
}

}  // namespace detail

std::vector<double> make_hann_window(std::size_t length) {
  if (length < 2)
    throw std::invalid_argument("make_hann_window: length must be at least 2");
  std::vector<double> w(length);
  const double two_pi = 2.0 * M_PI;
  for (std::size_t k = 0; k < length; ++k) {
    w[k] = 0.5 - 0.5 * std::cos(two_pi * static_cast<double>(k) /
                                static_cast<double>(length));
  }
  return w;
}

namespace {

// Overlap sum sum_n g[(l - n a) mod L]^2; a-periodic in l.
std::vector<double> overlap_sum(const std::vector<double>& window,
                                std::size_t hop, std::size_t len,
                                std::ptrdiff_t offset) {
  std::vector<double> overlap(len, 0.0);
  const std::size_t frames = len / hop;
  for (std::size_t n = 0; n < frames; ++n) {
    const std::ptrdiff_t base =
        static_cast<std::ptrdiff_t>(n * hop) - offset;
    for (std::size_t k = 0; k < window.size(); ++k) {
      const std::size_t l =
          detail::wrap_index(base + static_cast<std::ptrdiff_t>(k), len);
      overlap[l] += window[k] * window[k];
    }
  }
  return overlap;
}

}  // namespace

GaborFrame::GaborFrame(std::vector<double> window, std::size_t hop,
                       std::size_t modulations, std::size_t signal_len)
    : window_(std::move(window)),
      hop_(hop),
      mods_(modulations),
      len_(signal_len) {
  if (window_.empty()) throw std::invalid_argument("gabor: empty window");
  if (hop_ == 0 || mods_ == 0 || len_ == 0) {
    throw std::invalid_argument("gabor: dimensions must be positive");
  }
  if (len_ % hop_ != 0) {
    throw std::invalid_argument("gabor: hop must divide the signal length");
  }
  if (len_ % mods_ != 0) {
    throw std::invalid_argument(
        "gabor: modulation count must divide the signal length");
  }
  if (window_.size() > mods_) {
    throw std::invalid_argument(
        "gabor: window longer than modulation count (painless case needs "
        "w_g <= M)");
  }
  for (double v : window_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("gabor: window must be finite");
    }
  }
  offset_ = static_cast<std::ptrdiff_t>(window_.size() / 2);

  const std::vector<double> overlap = overlap_sum(window_, hop_, len_, offset_);
  double max_ov = 0.0;
  double max_dev = 0.0;
  for (double v : overlap) {
    max_ov = std::max(max_ov, v);
    max_dev = std::max(max_dev, std::abs(v - 1.0));
  }
  frame_bound_ = max_ov;
  tight_ = max_dev <= 1e-12;

  plan_ = std::make_shared<const detail::FftPlan>(mods_);
}

GaborFrame make_tight(const GaborFrame& frame) {
  if (frame.hop() > frame.window().size()) {
    throw std::invalid_argument(
        "make_tight: hop exceeds window length (needs a <= w_g)");
  }
  if (frame.is_tight()) return frame;

  const std::vector<double> overlap = overlap_sum(
      frame.window(), frame.hop(), frame.signal_len(), frame.window_offset());
  for (double v : overlap) {
    if (!(v > 0.0)) {
      throw NotAFrameError(
          "make_tight: window system does not cover the signal");
    }
  }
  // The overlap sum is hop-periodic, so normalizing the short window tap at
  // its frame-0 position is consistent for every frame.
  std::vector<double> tight = frame.window();
  for (std::size_t k = 0; k < tight.size(); ++k) {
    const std::size_t l = detail::wrap_index(
        static_cast<std::ptrdiff_t>(k) - frame.window_offset(),
        frame.signal_len());
    tight[k] /= std::sqrt(overlap[l]);
  }
  return GaborFrame(std::move(tight), frame.hop(), frame.modulations(),
                    frame.signal_len());
}

namespace detail {

void analyze_into(const GaborFrame& frame, const double* x, cplx* c) {
  const std::vector<double>& w = frame.window();
  const std::size_t len = frame.signal_len();
  const std::size_t hop = frame.hop();
  const std::size_t mods = frame.modulations();
  const std::size_t frames = frame.num_frames();
  const std::size_t bins = frame.num_bins();
  const std::ptrdiff_t off = frame.window_offset();

  std::vector<double> buf(mods);
  std::vector<cplx> spec(bins);
  for (std::size_t n = 0; n < frames; ++n) {
    std::fill(buf.begin(), buf.end(), 0.0);
    const std::ptrdiff_t base = static_cast<std::ptrdiff_t>(n * hop) - off;
    for (std::size_t k = 0; k < w.size(); ++k) {
      const std::size_t l = wrap_index(base + static_cast<std::ptrdiff_t>(k), len);
      buf[l % mods] += w[k] * x[l];
    }
    frame.plan().forward(buf.data(), spec.data());
    for (std::size_t m = 0; m < bins; ++m) c[n + m * frames] = spec[m];
  }
}

void synthesize_into(const GaborFrame& frame, const cplx* c, double* out) {
  const std::vector<double>& w = frame.window();
  const std::size_t len = frame.signal_len();
  const std::size_t hop = frame.hop();
  const std::size_t mods = frame.modulations();
  const std::size_t frames = frame.num_frames();
  const std::size_t bins = frame.num_bins();
  const std::ptrdiff_t off = frame.window_offset();
  const double inv_m = 1.0 / static_cast<double>(mods);

  std::fill(out, out + len, 0.0);
  std::vector<cplx> ch(bins);
  std::vector<double> buf(mods);
  for (std::size_t n = 0; n < frames; ++n) {
    for (std::size_t m = 0; m < bins; ++m) ch[m] = c[n + m * frames];
    // Only the real parts of the self-conjugate bins reach a real signal.
    ch[0] = cplx(ch[0].real(), 0.0);
    if (frame.has_nyquist_bin()) ch[bins - 1] = cplx(ch[bins - 1].real(), 0.0);
    frame.plan().inverse(ch.data(), buf.data());
    const std::ptrdiff_t base = static_cast<std::ptrdiff_t>(n * hop) - off;
    for (std::size_t k = 0; k < w.size(); ++k) {
      const std::size_t l = wrap_index(base + static_cast<std::ptrdiff_t>(k), len);
      out[l] += w[k] * buf[l % mods] * inv_m;
    }
  }
}

}  // namespace detail

CoefficientGrid analyze(const GaborFrame& frame, const Signal& x) {
  if (x.size() != frame.signal_len()) {
    throw std::invalid_argument("analyze: signal length does not match frame");
  }
  CoefficientGrid grid;
  grid.num_frames = frame.num_frames();
  grid.num_bins = frame.num_bins();
  grid.sample_rate = x.sample_rate;
  grid.values.resize(frame.num_coeffs());
  detail::analyze_into(frame, x.samples.data(), grid.values.data());
  return grid;
}

Signal synthesize(const GaborFrame& frame, const CoefficientGrid& grid) {
  if (grid.num_frames != frame.num_frames() ||
      grid.num_bins != frame.num_bins() ||
      grid.values.size() != frame.num_coeffs()) {
    throw std::invalid_argument("synthesize: grid does not match frame");
  }
  Signal out;
  out.sample_rate = grid.sample_rate;
  out.samples.resize(frame.signal_len());
  detail::synthesize_into(frame, grid.values.data(), out.samples.data());
  return out;
}

std::vector<cplx> atom(const GaborFrame& frame, std::size_t p) {
  if (p >= frame.num_coeffs()) {
    throw std::invalid_argument("atom: coefficient index out of range");
  }
  const std::size_t frames = frame.num_frames();
  const std::size_t n = p % frames;
  const std::size_t m = p / frames;
  const std::size_t len = frame.signal_len();
  const std::size_t mods = frame.modulations();
  const std::vector<double>& w = frame.window();

  std::vector<cplx> g(len, cplx(0.0, 0.0));
  const std::ptrdiff_t base =
      static_cast<std::ptrdiff_t>(n * frame.hop()) - frame.window_offset();
  for (std::size_t k = 0; k < w.size(); ++k) {
    const std::size_t l =
        detail::wrap_index(base + static_cast<std::ptrdiff_t>(k), len);
    // Reduce m*l mod M in exact integer arithmetic before forming the angle.
    const std::size_t phase_idx = (m * l) % mods;
    const double angle =
        2.0 * M_PI * static_cast<double>(phase_idx) / static_cast<double>(mods);
    g[l] = w[k] * std::polar(1.0, angle);
  }
  return g;
}

}  // namespace ainp
