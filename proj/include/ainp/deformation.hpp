#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ainp/gabor.hpp"

namespace ainp {

struct LearnReport {
  int iterations = 0;
  double initial_l11 = 0.0;
  double final_l11 = 0.0;
};

/// Banded unitary deformation of the bin axis. Applying it to a coefficient
/// grid left-multiplies the M' x N reshape: out(m, .) = sum_j D(m, j) c(j, .).
/// Kept unitary and exactly banded by construction (composition of Givens
/// rotations on disjoint row pairs).
class Deformation {
 public:
  Deformation() = default;
  Deformation(Eigen::MatrixXcd matrix, int band, LearnReport report = {});

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  int band() const { return band_; }
  const LearnReport& report() const { return report_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

  /// Row i is exactly the i-th unit row (bit-level 1 and 0 entries).
  bool row_is_identity(std::size_t i) const {
    return unit_rows_[i] != 0;
  }
  /// Column j is exactly the j-th unit column.
  bool col_is_identity(std::size_t j) const {
    return unit_cols_[j] != 0;
  }

  /// Checks squareness, the exact band structure, and unitarity within
  /// 1e-8 Frobenius; throws std::invalid_argument otherwise.
  void validate() const;

 private:
  Eigen::MatrixXcd matrix_;
  int band_ = 0;
  LearnReport report_;
  std::vector<std::uint8_t> unit_rows_;
  std::vector<std::uint8_t> unit_cols_;
};

Deformation identity_deformation(std::size_t dim, int band = 1);

struct LearnConfig {
  int iter_max = 20;
  int band_d = 1;
  double rho_start = 1.0;
  double eps = 0x1p-20;
  /// Keep row 0 (DC) fixed; required when deforming coefficients of real
  /// signals so the conjugate-extended synthesis stays real.
  bool lock_first_row = false;
  /// Keep the last row (Nyquist, even M) fixed, same reason.
  bool lock_last_row = false;
};

/// Learns argmin ||D X||_{1,1} over banded unitary D, smoothing |.| as
/// sqrt(|.|^2 + rho) with rho halved per outer pass from rho_start until
/// rho < eps or iter_max passes. Coordinate descent over complex Givens
/// rotations on disjoint row pairs (i, i+delta), delta <= band_d, each with a
/// 1-D line search in angle and phase; pairs activate greedily by gain.
/// Initialized at identity and never worse than it: the reported final
/// objective is the best true l1,1 seen, and that snapshot is returned.
Deformation learn_deformation(const Eigen::MatrixXcd& x, const LearnConfig& cfg);

CoefficientGrid apply_deformation(const Deformation& d,
                                  const CoefficientGrid& grid);
CoefficientGrid apply_deformation_adjoint(const Deformation& d,
                                          const CoefficientGrid& grid);

namespace detail {
/// Banded multiply on raw grid buffers (layout c[n + m N]); out != in.
void apply_deformation_into(const Deformation& d, const cplx* in, cplx* out,
                            std::size_t num_frames);
void apply_deformation_adjoint_into(const Deformation& d, const cplx* in,
                                    cplx* out, std::size_t num_frames);
}  // namespace detail

/// Binary file: magic, dimensions, band, learn report, then the dense
/// complex matrix row-major as little-endian doubles.
void save_deformation(const Deformation& d, const std::string& path);
Deformation load_deformation(const std::string& path);

}  // namespace ainp
