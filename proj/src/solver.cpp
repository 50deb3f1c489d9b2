#include "ainp/solver.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>

#include "ainp/errors.hpp"

namespace ainp {

std::vector<cplx> clip(std::vector<cplx> z, const std::vector<double>& w) {
  if (z.size() != w.size())
    throw std::invalid_argument("clip: length mismatch");
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!(w[i] >= 0.0))
      throw std::invalid_argument("clip: weights must be nonnegative");
    const double mag = std::abs(z[i]);
    if (mag > w[i]) z[i] *= w[i] / mag;
  }
  return z;
}

double estimate_analysis_norm(const GaborFrame& frame, int iters) {
  if (iters < 1) throw std::invalid_argument("power iteration: iters < 1");
  const std::size_t len = frame.signal_len();
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::vector<double> v(len);
  double nrm2 = 0.0;
  for (std::size_t l = 0; l < len; ++l) {
    // Uniform in [-1, 1) from raw engine draws; independent of any
    // library's distribution implementation.
    const double u =
        static_cast<double>(rng() >> 11) * 0x1.0p-53;
    v[l] = 2.0 * u - 1.0;
    nrm2 += v[l] * v[l];
  }
  if (nrm2 == 0.0) v[0] = nrm2 = 1.0;
  double scale = 1.0 / std::sqrt(nrm2);
  for (double& s : v) s *= scale;

  std::vector<cplx> c(frame.num_coeffs());
  std::vector<double> fv(len);
  double lambda = frame.frame_bound();
  for (int it = 0; it < iters; ++it) {
    detail::analyze_into(frame, v.data(), c.data());
    detail::synthesize_into(frame, c.data(), fv.data());
    double ray = 0.0, out2 = 0.0;
    for (std::size_t l = 0; l < len; ++l) {
      ray += v[l] * fv[l];
      out2 += fv[l] * fv[l];
    }
    if (out2 == 0.0) break;
    lambda = ray;
    scale = 1.0 / std::sqrt(out2);
    for (std::size_t l = 0; l < len; ++l) v[l] = fv[l] * scale;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

std::pair<double, double> default_step_sizes(const GaborFrame& frame) {
  if (frame.is_tight()) return {0.99, 0.99};
  const double norm = estimate_analysis_norm(frame);
  if (!(norm > 0.0)) throw NotAFrameError("frame operator has no energy");
  return {0.99 / norm, 0.99 / norm};
}

namespace {

SolveResult run_cp(const GaborFrame& frame, const ReliabilityMask& mask,
                   const Signal& x, const Deformation* def,
                   const WeightVector& weights, const SolverConfig& cfg) {
  const std::size_t len = frame.signal_len();
  const std::size_t num = frame.num_coeffs();
  const std::size_t frames = frame.num_frames();
  if (x.size() != len)
    throw std::invalid_argument("solve: signal length mismatch");
  if (mask.size() != len)
    throw std::invalid_argument("solve: mask length mismatch");
  if (weights.size() != num)
    throw std::invalid_argument("solve: weight length mismatch");
  for (double w : weights.values)
    if (!(w >= 0.0))
      throw std::invalid_argument("solve: weights must be nonnegative");
  if (def && def->dim() != frame.num_bins())
    throw std::invalid_argument("solve: deformation dimension mismatch");
  if (def) def->validate();

  double tau = cfg.tau;
  double sigma = cfg.sigma;
  if (tau == 0.0 || sigma == 0.0) {
    const auto [t, s] = default_step_sizes(frame);
    if (tau == 0.0) tau = t;
    if (sigma == 0.0) sigma = s;
  }
  if (!(tau > 0.0) || !(sigma > 0.0))
    throw std::invalid_argument("solve: step sizes must be positive");
  // Convergence requires tau sigma ||K||^2 <= 1; the deformation is unitary
  // on the bin axis so it does not change the operator norm.
  if (tau * sigma * frame.frame_bound() > 1.0 + 1e-9)
    throw std::invalid_argument("solve: step sizes violate tau sigma ||K||^2 <= 1");
  if (cfg.min_iters < 0)
    throw std::invalid_argument("solve: min_iters must be nonnegative");
  if (cfg.max_iters < 1 || cfg.max_iters < cfg.min_iters)
    throw std::invalid_argument("solve: bad max_iters");
  if (!(cfg.tol_eps > 0.0))
    throw std::invalid_argument("solve: tol_eps must be positive");

  std::vector<double> p(len, 0.0), z(len), synth(len);
  detail::project_feasible_inplace(mask, x.samples.data(), p.data());
  z = p;

  std::vector<cplx> q(num, cplx(0.0, 0.0)), cz(num), cprev(num);
  std::vector<cplx> dbuf;
  if (def) dbuf.resize(num);
  const double* w = weights.values.data();

  SolveResult res;
  res.objective_trace.reserve(static_cast<std::size_t>(cfg.max_iters));
  int it = 0;
  for (; it < cfg.max_iters; ++it) {
    detail::analyze_into(frame, z.data(), cz.data());
    if (it >= cfg.min_iters) {
      double dn = 0.0, pn = 0.0;
      for (std::size_t k = 0; k < num; ++k) {
        dn += std::norm(cz[k] - cprev[k]);
        pn += std::norm(cprev[k]);
      }
      res.final_residual =
          pn > 0.0 ? dn / pn
                   : (dn > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
      if (dn <= cfg.tol_eps * pn) {
        res.converged = true;
        break;
      }
    }

    const cplx* kz;
    if (def) {
      detail::apply_deformation_into(*def, cz.data(), dbuf.data(), frames);
      kz = dbuf.data();
    } else {
      kz = cz.data();
    }

    double obj = 0.0;
    for (std::size_t k = 0; k < num; ++k) {
      obj += w[k] * std::abs(kz[k]);
      cplx t = q[k] + sigma * kz[k];
      const double mag = std::abs(t);
      if (mag > w[k]) t *= w[k] / mag;
      q[k] = t;
    }
    res.objective_trace.push_back(obj);

    const cplx* qb;
    if (def) {
      detail::apply_deformation_adjoint_into(*def, q.data(), dbuf.data(),
                                             frames);
      qb = dbuf.data();
    } else {
      qb = q.data();
    }
    detail::synthesize_into(frame, qb, synth.data());

    for (std::size_t l = 0; l < len; ++l) {
      const double v =
          mask.is_reliable(l) ? x.samples[l] : p[l] - tau * synth[l];
      z[l] = 2.0 * v - p[l];
      p[l] = v;
    }
    std::swap(cz, cprev);
    if (cfg.observer) cfg.observer(it, p, q, z);
  }

  res.iterations = it;
  res.restored.sample_rate = x.sample_rate;
  res.restored.samples = std::move(z);
  detail::project_feasible_inplace(mask, x.samples.data(),
                                   res.restored.samples.data());
  return res;
}

}  // namespace

SolveResult solve_cp(const GaborFrame& frame, const ReliabilityMask& mask,
                     const Signal& x, const WeightVector& weights,
                     const SolverConfig& cfg) {
  return run_cp(frame, mask, x, nullptr, weights, cfg);
}

SolveResult solve_cp_learned(const GaborFrame& frame,
                             const ReliabilityMask& mask, const Signal& x,
                             const Deformation& d, const WeightVector& weights,
                             const SolverConfig& cfg) {
  return run_cp(frame, mask, x, &d, weights, cfg);
}

}  // namespace ainp
