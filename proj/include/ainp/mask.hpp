#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ainp/gabor.hpp"
#include "ainp/signal.hpp"

namespace ainp {

/// Per-sample reliability flags; nonzero = sample is known and must be kept.
struct ReliabilityMask {
  std::vector<std::uint8_t> reliable;

  std::size_t size() const { return reliable.size(); }
  bool is_reliable(std::size_t i) const { return reliable[i] != 0; }
  std::size_t num_reliable() const;
  /// Maximal runs of unreliable samples as (start, length), left to right.
  std::vector<std::pair<std::size_t, std::size_t>> gap_runs() const;
};

/// Gap positions in original sample indices, serialized as JSON with field
/// names signal_len, sample_rate and per-gap start_sample, length_samples.
struct GapSpec {
  struct Gap {
    std::size_t start_sample = 0;
    std::size_t length_samples = 0;
  };
  std::vector<Gap> gaps;
  std::size_t signal_len = 0;
  int sample_rate = 44100;

  /// Gaps in range, positive length, pairwise disjoint.
  void validate() const;
};

GapSpec load_gap_spec(const std::string& path);
void save_gap_spec(const GapSpec& spec, const std::string& path);

/// Mask with the spec's gaps unreliable; everything else reliable. When
/// padded_len > signal_len the tail padding is reliable too.
ReliabilityMask build_mask(const GapSpec& spec, std::size_t padded_len = 0);

/// Projection onto { y : y = x on reliable samples }: bit-copies x where
/// reliable, takes Re(z) elsewhere.
Signal project_feasible(const ReliabilityMask& mask, const Signal& x,
                        const std::vector<cplx>& z);

namespace detail {
/// Real fast path used by the solver: overwrites z with the projection.
void project_feasible_inplace(const ReliabilityMask& mask, const double* x,
                              double* z);
}  // namespace detail

/// Context frames around the gaps: per gap, the k nearest frames on each
/// side whose full window support is reliable; merged, sorted, de-duplicated.
struct NeighborhoodSelection {
  std::vector<std::size_t> frames;
  std::size_t context_k = 0;
};

/// Gap positions are (start, length) pairs in mask coordinates; length 0
/// marks a bare position. Throws EmptyNeighborhoodError when no frame
/// qualifies.
NeighborhoodSelection select_neighborhood(
    const GaborFrame& frame, const ReliabilityMask& mask,
    const std::vector<std::pair<std::size_t, std::size_t>>& gaps,
    std::size_t k);

/// Convenience overload: gap positions taken from the mask's unreliable runs.
NeighborhoodSelection select_neighborhood(const GaborFrame& frame,
                                          const ReliabilityMask& mask,
                                          std::size_t k);

/// M' x |selection| matrix; column j holds the coefficients of context frame
/// frames[j] across all bins.
Eigen::MatrixXcd extract_neighborhood_coeffs(const CoefficientGrid& grid,
                                             const NeighborhoodSelection& sel);

}  // namespace ainp
