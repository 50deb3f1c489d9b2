#include "ainp/janssen.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ainp/errors.hpp"

namespace ainp {

namespace {

// Levinson-Durbin on autocorrelation r[0..p]; fills a[1..p] with predictor
// coefficients (x[n] ~ sum_k a[k] x[n-k]). Returns false on breakdown.
bool levinson_ar(const std::vector<double>& r, int p, std::vector<double>& a) {
  a.assign(static_cast<std::size_t>(p) + 1, 0.0);
  double e = r[0];
  if (!(e > 0.0)) return false;
  std::vector<double> prev(a);
  for (int k = 1; k <= p; ++k) {
    double acc = r[static_cast<std::size_t>(k)];
    for (int j = 1; j < k; ++j)
      acc -= a[static_cast<std::size_t>(j)] * r[static_cast<std::size_t>(k - j)];
    const double kappa = acc / e;
    prev = a;
    a[static_cast<std::size_t>(k)] = kappa;
    for (int j = 1; j < k; ++j)
      a[static_cast<std::size_t>(j)] =
          prev[static_cast<std::size_t>(j)] -
          kappa * prev[static_cast<std::size_t>(k - j)];
    e *= 1.0 - kappa * kappa;
    if (!(e > 0.0) || !std::isfinite(e)) return false;
  }
  return true;
}

// Solves T u = rhs for symmetric positive definite Toeplitz T with first
// column `col` (col[0] > 0). Returns false on breakdown.
bool levinson_solve(const std::vector<double>& col,
                    const std::vector<double>& rhs, std::vector<double>& u) {
  const std::size_t n = rhs.size();
  u.assign(n, 0.0);
  if (n == 0) return true;
  if (!(col[0] > 0.0)) return false;
  const double t0 = col[0];
  std::vector<double> r(n, 0.0), b(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) r[k] = col[k] / t0;
  for (std::size_t k = 0; k < n; ++k) b[k] = rhs[k] / t0;

  u[0] = b[0];
  if (n == 1) return true;
  std::vector<double> y(n, 0.0), tmp(n, 0.0);
  y[0] = -r[1];
  double beta = 1.0;
  double alpha = -r[1];
  for (std::size_t k = 1; k < n; ++k) {
    beta *= 1.0 - alpha * alpha;
    if (!(beta > 0.0) || !std::isfinite(beta)) return false;
    double dot = 0.0;
    for (std::size_t j = 0; j < k; ++j) dot += r[j + 1] * u[k - 1 - j];
    const double mu = (b[k] - dot) / beta;
    for (std::size_t j = 0; j < k; ++j) tmp[j] = u[j] + mu * y[k - 1 - j];
    std::copy(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(k),
              u.begin());
    u[k] = mu;
    if (k + 1 < n) {
      double dy = 0.0;
      for (std::size_t j = 0; j < k; ++j) dy += r[j + 1] * y[k - 1 - j];
      alpha = -(r[k + 1] + dy) / beta;
      for (std::size_t j = 0; j < k; ++j) tmp[j] = y[j] + alpha * y[k - 1 - j];
      std::copy(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(k),
                y.begin());
      y[k] = alpha;
    }
  }
  return true;
}

// Zero-padded prediction-error energy sum_n (sum_k ahat[k] s[n-k])^2 of the
// frame, with s taken as zero outside [0, len).
double prediction_error(const std::vector<double>& frame,
                        const std::vector<double>& ahat) {
  const std::size_t len = frame.size();
  const std::size_t p = ahat.size() - 1;
  double total = 0.0;
  for (std::size_t n = 0; n < len + p; ++n) {
    double e = 0.0;
    const std::size_t k_lo = n >= len ? n - len + 1 : 0;
    const std::size_t k_hi = std::min(p, n);
    for (std::size_t k = k_lo; k <= k_hi; ++k) e += ahat[k] * frame[n - k];
    total += e * e;
  }
  return total;
}

struct GapWorkspace {
  std::vector<double> frame;     // current frame content
  std::vector<std::size_t> t;    // missing positions, frame-local
  bool contiguous = false;
  std::size_t start = 0;         // frame offset in the signal
};

void solve_missing(GapWorkspace& ws, const std::vector<double>& ahat) {
  const std::size_t p = ahat.size() - 1;
  const std::size_t h = ws.t.size();
  // Filter autocorrelation b[l] = sum_k ahat[k] ahat[k+l].
  std::vector<double> b(p + 1, 0.0);
  for (std::size_t l = 0; l <= p; ++l)
    for (std::size_t k = 0; k + l <= p; ++k) b[l] += ahat[k] * ahat[k + l];

  // Prediction error of the frame with missing samples zeroed.
  std::vector<double> known(ws.frame);
  for (std::size_t i : ws.t) known[i] = 0.0;
  const std::size_t len = known.size();
  std::vector<double> e(len + p, 0.0);
  for (std::size_t n = 0; n < len + p; ++n) {
    const std::size_t k_lo = n >= len ? n - len + 1 : 0;
    const std::size_t k_hi = std::min(p, n);
    double v = 0.0;
    for (std::size_t k = k_lo; k <= k_hi; ++k) v += ahat[k] * known[n - k];
    e[n] = v;
  }
  std::vector<double> rhs(h, 0.0);
  for (std::size_t i = 0; i < h; ++i) {
    double v = 0.0;
    for (std::size_t k = 0; k <= p; ++k) v -= ahat[k] * e[ws.t[i] + k];
    rhs[i] = v;
  }

  std::vector<double> u;
  bool ok = false;
  if (ws.contiguous) {
    // B is symmetric Toeplitz: B_ij = b[|t_i - t_j|] with consecutive t.
    std::vector<double> col(h, 0.0);
    for (std::size_t i = 0; i < h; ++i) col[i] = i <= p ? b[i] : 0.0;
    ok = levinson_solve(col, rhs, u);
  }
  if (!ok) {
    Eigen::MatrixXd bm(static_cast<Eigen::Index>(h), static_cast<Eigen::Index>(h));
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < h; ++j) {
        const std::size_t d = ws.t[i] > ws.t[j] ? ws.t[i] - ws.t[j]
                                                : ws.t[j] - ws.t[i];
        bm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            d <= p ? b[d] : 0.0;
      }
    Eigen::VectorXd rv(static_cast<Eigen::Index>(h));
    for (std::size_t i = 0; i < h; ++i) rv(static_cast<Eigen::Index>(i)) = rhs[i];
    Eigen::LDLT<Eigen::MatrixXd> ldlt(bm);
    Eigen::VectorXd sol;
    if (ldlt.info() == Eigen::Success) {
      sol = ldlt.solve(rv);
    }
    if (ldlt.info() != Eigen::Success || !sol.allFinite()) {
      bm.diagonal().array() += 1e-9 * b[0];
      sol = bm.ldlt().solve(rv);
    }
    u.resize(h);
    for (std::size_t i = 0; i < h; ++i) u[i] = sol(static_cast<Eigen::Index>(i));
    ok = true;
  }
  for (std::size_t i = 0; i < h; ++i) {
    const double v = u[i];
    ws.frame[ws.t[i]] = std::isfinite(v) ? v : 0.0;
  }
}

}  // namespace

JanssenDiagnostics janssen_inpaint_traced(const Signal& x,
                                          const ReliabilityMask& mask,
                                          const JanssenConfig& cfg) {
  if (mask.size() != x.size())
    throw std::invalid_argument("janssen: mask length mismatch");
  if (cfg.window_len < 4)
    throw std::invalid_argument("janssen: window_len too small");
  if (cfg.iterations < 1)
    throw std::invalid_argument("janssen: iterations must be at least 1");

  JanssenDiagnostics out;
  out.restored = x;
  auto& y = out.restored.samples;
  const std::size_t len = x.size();
  const std::size_t wlen = std::min(cfg.window_len, len);

  const auto runs = mask.gap_runs();
  for (const auto& [start, glen] : runs)
    if (2 * glen >= cfg.window_len)
      throw GapTooLongError("janssen: gap of " + std::to_string(glen) +
                            " samples needs a window longer than " +
                            std::to_string(cfg.window_len));

  for (const auto& [gstart, glen] : runs) {
    GapWorkspace ws;
    const std::size_t center = gstart + glen / 2;
    std::size_t f0 = center >= wlen / 2 ? center - wlen / 2 : 0;
    f0 = std::min(f0, len - wlen);
    ws.start = f0;
    ws.frame.assign(y.begin() + static_cast<std::ptrdiff_t>(f0),
                    y.begin() + static_cast<std::ptrdiff_t>(f0 + wlen));
    for (std::size_t k = 0; k < wlen; ++k)
      if (!mask.is_reliable(f0 + k)) ws.t.push_back(k);
    if (ws.t.empty()) continue;
    ws.contiguous = ws.t.back() - ws.t.front() + 1 == ws.t.size();

    const std::size_t h = ws.t.size();
    std::size_t order = std::min(3 * h + 2, wlen / 3);
    order = std::clamp<std::size_t>(order, 1, wlen - 1);
    const int p = static_cast<int>(order);

    std::vector<double> trace;
    trace.reserve(static_cast<std::size_t>(cfg.iterations));
    std::vector<double> r(order + 1), a, ahat(order + 1);
    for (int iter = 0; iter < cfg.iterations; ++iter) {
      // AR fit on the biased autocorrelation of the current frame.
      for (std::size_t l = 0; l <= order; ++l) {
        double acc = 0.0;
        for (std::size_t n = 0; n + l < wlen; ++n)
          acc += ws.frame[n] * ws.frame[n + l];
        r[l] = acc;
      }
      bool ok = levinson_ar(r, p, a);
      if (!ok && r[0] > 0.0) {
        std::vector<double> loaded(r);
        loaded[0] += 1e-9 * r[0];
        ok = levinson_ar(loaded, p, a);
      }
      if (!ok) a.assign(order + 1, 0.0);
      ahat[0] = 1.0;
      for (std::size_t k = 1; k <= order; ++k) ahat[k] = -a[k];

      solve_missing(ws, ahat);
      trace.push_back(prediction_error(ws.frame, ahat));
    }
    for (std::size_t i : ws.t) y[ws.start + i] = ws.frame[i];
    out.residual_traces.push_back(std::move(trace));
  }
  return out;
}

Signal janssen_inpaint(const Signal& x, const ReliabilityMask& mask,
                       const JanssenConfig& cfg) {
  return janssen_inpaint_traced(x, mask, cfg).restored;
}

}  // namespace ainp
