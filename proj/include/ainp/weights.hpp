#pragma once

#include <cstddef>
#include <vector>

#include "ainp/deformation.hpp"
#include "ainp/gabor.hpp"
#include "ainp/mask.hpp"

namespace ainp {

/// Per-coefficient nonnegative weights in grid layout (values[n + m N]).
struct WeightVector {
  std::vector<double> values;
  std::size_t size() const { return values.size(); }
};

/// w_p = ||M_R g_p||^2 / ||g_p||^2: the fraction of atom energy sitting on
/// reliable samples. Depends only on the time frame for a plain Gabor
/// system, so one ratio per frame is broadcast across bins. Atoms with fully
/// reliable support get exactly 1, atoms fully inside a gap exactly 0.
WeightVector energy_weights(const GaborFrame& frame,
                            const ReliabilityMask& mask);

/// Same ratio on deformed atoms: column p of the synthesis operator composed
/// with the adjoint block deformation, i.e. sum_j conj(D(m, j)) g_{(j, n)}.
/// Rows of D equal to identity fall back to the plain per-frame ratio, so an
/// identity deformation reproduces energy_weights exactly.
WeightVector learned_energy_weights(const GaborFrame& frame,
                                    const ReliabilityMask& mask,
                                    const Deformation& d);

}  // namespace ainp
