#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "ainp/deformation.hpp"
#include "ainp/gabor.hpp"
#include "ainp/mask.hpp"
#include "ainp/signal.hpp"
#include "ainp/weights.hpp"

namespace ainp {

/// Entrywise projection onto {|z_p| <= w_p}: values already inside the ball
/// are returned unchanged (bit for bit), others are radially rescaled.
/// Throws std::invalid_argument on length mismatch or a negative weight.
std::vector<cplx> clip(std::vector<cplx> z, const std::vector<double>& w);

struct SolverConfig {
  /// Primal/dual step sizes; 0 means derive defaults from the frame
  /// (0.99 each for a tight frame, else 0.99 / ||analysis||).
  double tau = 0.0;
  double sigma = 0.0;
  /// Stop when ||c_i - c_{i-1}||^2 <= tol_eps ||c_{i-1}||^2 on the analysis
  /// coefficients of the relaxed iterate.
  double tol_eps = 1e-8;
  int min_iters = 10;
  int max_iters = 3000;
  /// Called after each completed iteration with (iteration index, primal p,
  /// dual q, relaxed iterate z). For diagnostics and tests.
  std::function<void(int, const std::vector<double>&,
                     const std::vector<cplx>&, const std::vector<double>&)>
      observer;
};

struct SolveResult {
  Signal restored;
  int iterations = 0;
  bool converged = false;
  double final_residual = 0.0;
  /// Weighted l1 of the (deformed) analysis coefficients of z, one entry per
  /// iteration performed.
  std::vector<double> objective_trace;
};

/// tau = sigma = 0.99 for a tight frame, else 0.99 / ||analysis||.
std::pair<double, double> default_step_sizes(const GaborFrame& frame);

/// Largest singular value of the analysis map, by power iteration on the
/// frame operator with a fixed seed.
double estimate_analysis_norm(const GaborFrame& frame, int iters = 50);

/// Primal-dual (Chambolle-Pock) minimization of ||diag(w) analyze(s)||_1
/// over signals s that agree with x on reliable samples. Reliable samples of
/// the result equal x exactly.
SolveResult solve_cp(const GaborFrame& frame, const ReliabilityMask& mask,
                     const Signal& x, const WeightVector& weights,
                     const SolverConfig& cfg = {});

/// Same iteration with the banded unitary deformation composed after
/// analysis (and its adjoint before synthesis). With the identity
/// deformation this reproduces solve_cp exactly.
SolveResult solve_cp_learned(const GaborFrame& frame,
                             const ReliabilityMask& mask, const Signal& x,
                             const Deformation& d, const WeightVector& weights,
                             const SolverConfig& cfg = {});

}  // namespace ainp
