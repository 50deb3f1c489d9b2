#include "ainp/deformation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "ainp/errors.hpp"

namespace ainp {

namespace {

bool is_unit_row(const Eigen::MatrixXcd& m, std::size_t i) {
  const auto cols = static_cast<std::size_t>(m.cols());
  for (std::size_t j = 0; j < cols; ++j) {
    const cplx v = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    if (i == j) {
      if (v != cplx(1.0, 0.0)) return false;
    } else if (v != cplx(0.0, 0.0)) {
      return false;
    }
  }
  return true;
}

bool is_unit_col(const Eigen::MatrixXcd& m, std::size_t j) {
  const auto rows = static_cast<std::size_t>(m.rows());
  for (std::size_t i = 0; i < rows; ++i) {
    const cplx v = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    if (i == j) {
      if (v != cplx(1.0, 0.0)) return false;
    } else if (v != cplx(0.0, 0.0)) {
      return false;
    }
  }
  return true;
}

}  // namespace

Deformation::Deformation(Eigen::MatrixXcd matrix, int band, LearnReport report)
    : matrix_(std::move(matrix)), band_(band), report_(report) {
  if (matrix_.rows() != matrix_.cols())
    throw std::invalid_argument("deformation: matrix must be square");
  if (band_ < 0) throw std::invalid_argument("deformation: negative band");
  const auto dim = static_cast<std::size_t>(matrix_.rows());
  unit_rows_.resize(dim);
  unit_cols_.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    unit_rows_[i] = is_unit_row(matrix_, i) ? 1 : 0;
    unit_cols_[i] = is_unit_col(matrix_, i) ? 1 : 0;
  }
}

void Deformation::validate() const {
  if (matrix_.rows() != matrix_.cols())
    throw std::invalid_argument("deformation: matrix must be square");
  const auto dim = static_cast<std::size_t>(matrix_.rows());
  if (dim == 0) throw std::invalid_argument("deformation: empty matrix");
  const auto d = static_cast<std::size_t>(band_);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      const std::size_t gap = i > j ? i - j : j - i;
      if (gap > d && matrix_(static_cast<Eigen::Index>(i),
                             static_cast<Eigen::Index>(j)) != cplx(0.0, 0.0))
        throw std::invalid_argument("deformation: entry outside band");
    }
  // Unitarity on the banded Gram matrix: columns i and j can only overlap
  // when |i - j| <= 2 band, entries further out are exactly zero.
  double err2 = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    const std::size_t j_hi = std::min(dim - 1, i + 2 * d);
    for (std::size_t j = i; j <= j_hi; ++j) {
      const std::size_t k_lo = std::max(i > d ? i - d : 0, j > d ? j - d : 0);
      const std::size_t k_hi = std::min(dim - 1, std::min(i + d, j + d));
      cplx g(0.0, 0.0);
      for (std::size_t k = k_lo; k <= k_hi; ++k)
        g += std::conj(matrix_(static_cast<Eigen::Index>(k),
                               static_cast<Eigen::Index>(i))) *
             matrix_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
      if (i == j) g -= 1.0;
      err2 += (i == j ? 1.0 : 2.0) * std::norm(g);
    }
  }
  if (!(std::sqrt(err2) <= 1e-8))
    throw std::invalid_argument("deformation: matrix is not unitary");
}

Deformation identity_deformation(std::size_t dim, int band) {
  if (dim == 0) throw std::invalid_argument("deformation: empty matrix");
  return Deformation(
      Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(dim),
                                 static_cast<Eigen::Index>(dim)),
      band);
}

namespace {

// Rotation of a row pair (u, v) by G(theta, phi):
//   u' =  cos(theta) u + sin(theta) e^{i phi} v
//   v' = -sin(theta) e^{-i phi} u + cos(theta) v
// The smoothed objective of the pair needs only A = |u|^2, B = |v|^2 and
// z = v conj(u) per column:
//   |u'|^2 = c^2 A + s^2 B + 2 c s Re(e^{i phi} z)
//   |v'|^2 = s^2 A + c^2 B - 2 c s Re(e^{i phi} z)
struct PairData {
  std::vector<double> a, b, zr, zi;

  void gather(const Eigen::MatrixXcd& y, std::size_t i, std::size_t j) {
    const auto cols = static_cast<std::size_t>(y.cols());
    a.resize(cols);
    b.resize(cols);
    zr.resize(cols);
    zi.resize(cols);
    for (std::size_t k = 0; k < cols; ++k) {
      const cplx u = y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
      const cplx v = y(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
      a[k] = std::norm(u);
      b[k] = std::norm(v);
      const cplx z = v * std::conj(u);
      zr[k] = z.real();
      zi[k] = z.imag();
    }
  }

  double eval(double theta, double phi, double rho) const {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double cc = c * c;
    const double ss = s * s;
    const double cs2 = 2.0 * c * s;
    const double cp = std::cos(phi);
    const double sp = std::sin(phi);
    double total = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double cross = cs2 * (cp * zr[k] - sp * zi[k]);
      total += std::sqrt(cc * a[k] + ss * b[k] + cross + rho) +
               std::sqrt(ss * a[k] + cc * b[k] - cross + rho);
    }
    return total;
  }

  double baseline(double rho) const {
    double total = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
      total += std::sqrt(a[k] + rho) + std::sqrt(b[k] + rho);
    return total;
  }
};

struct Rotation {
  double theta = 0.0;
  double phi = 0.0;
  double value = 0.0;
};

template <typename F>
std::pair<double, double> golden_min(F f, double lo, double hi, int iters) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

// Coarse grid over (theta, phi), then alternating golden-section refinement.
Rotation best_rotation(const PairData& pd, double rho) {
  constexpr int kThetaGrid = 9;
  constexpr int kPhiGrid = 8;
  constexpr double kPi = std::numbers::pi;
  Rotation best{0.0, 0.0, pd.baseline(rho)};
  for (int it = 0; it < kThetaGrid; ++it) {
    const double theta =
        -kPi / 2.0 + kPi * (static_cast<double>(it) + 0.5) / kThetaGrid;
    for (int ip = 0; ip < kPhiGrid; ++ip) {
      const double phi = -kPi + 2.0 * kPi * static_cast<double>(ip) / kPhiGrid;
      const double v = pd.eval(theta, phi, rho);
      if (v < best.value) best = {theta, phi, v};
    }
  }
  const double dt = kPi / kThetaGrid;
  const double dp = kPi / kPhiGrid;
  for (int round = 0; round < 3; ++round) {
    auto [t, vt] = golden_min(
        [&](double th) { return pd.eval(th, best.phi, rho); }, best.theta - dt,
        best.theta + dt, 32);
    if (vt < best.value) {
      best.theta = t;
      best.value = vt;
    }
    auto [p, vp] = golden_min(
        [&](double ph) { return pd.eval(best.theta, ph, rho); }, best.phi - dp,
        best.phi + dp, 32);
    if (vp < best.value) {
      best.phi = p;
      best.value = vp;
    }
  }
  return best;
}

void apply_rotation(Eigen::MatrixXcd& m, std::size_t i, std::size_t j,
                    double theta, double phi) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const cplx eip = std::polar(1.0, phi);
  const auto cols = static_cast<std::size_t>(m.cols());
  for (std::size_t k = 0; k < cols; ++k) {
    const cplx u = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
    const cplx v = m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
        c * u + s * eip * v;
    m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
        -s * std::conj(eip) * u + c * v;
  }
}

}  // namespace

Deformation learn_deformation(const Eigen::MatrixXcd& x,
                              const LearnConfig& cfg) {
  if (cfg.iter_max < 1)
    throw std::invalid_argument("learn: iter_max must be at least 1");
  if (cfg.band_d < 0) throw std::invalid_argument("learn: negative band");
  if (!(cfg.rho_start > 0.0))
    throw std::invalid_argument("learn: rho_start must be positive");
  if (!(cfg.eps > 0.0 && cfg.eps < cfg.rho_start))
    throw std::invalid_argument("learn: need 0 < eps < rho_start");
  if (x.rows() == 0) throw std::invalid_argument("learn: empty input");

  const auto dim = static_cast<std::size_t>(x.rows());
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Identity(x.rows(), x.rows());
  Eigen::MatrixXcd y = x;

  const auto true_l11 = [&]() { return y.cwiseAbs().sum(); };
  const double initial = true_l11();
  LearnReport report;
  report.initial_l11 = initial;
  report.final_l11 = initial;

  const std::size_t row_lo = cfg.lock_first_row ? 1 : 0;
  const std::size_t row_hi =
      dim >= 1 + (cfg.lock_last_row ? 1u : 0u)
          ? dim - 1 - (cfg.lock_last_row ? 1 : 0)
          : 0;
  const bool feasible = cfg.band_d >= 1 && x.cols() > 0 && initial > 0.0 &&
                        row_hi > row_lo;
  if (!feasible) return Deformation(std::move(d), cfg.band_d, report);

  Eigen::MatrixXcd best_d = d;
  double best_obj = initial;

  // owner[r] is the index into `active` of the pair using row r, or -1.
  std::vector<int> owner(dim, -1);
  struct ActivePair {
    std::size_t i, j;
  };
  std::vector<ActivePair> active;
  constexpr double kRelGain = 1e-12;

  PairData pd;
  int passes = 0;
  for (int it = 0; it < cfg.iter_max; ++it) {
    const double rho = cfg.rho_start * std::pow(0.5, it);
    if (rho < cfg.eps) break;
    ++passes;
    bool changed = false;

    double total = 0.0;
    for (Eigen::Index r = 0; r < y.rows(); ++r)
      for (Eigen::Index k = 0; k < y.cols(); ++k)
        total += std::sqrt(std::norm(y(r, k)) + rho);

    // Re-optimize the pairs already active, in row order.
    for (const ActivePair& ap : active) {
      pd.gather(y, ap.i, ap.j);
      const Rotation rot = best_rotation(pd, rho);
      const double gain = pd.baseline(rho) - rot.value;
      if (gain > kRelGain * total) {
        apply_rotation(y, ap.i, ap.j, rot.theta, rot.phi);
        apply_rotation(d, ap.i, ap.j, rot.theta, rot.phi);
        total -= gain;
        changed = true;
      }
    }

    // Candidate activations on rows not yet claimed by a pair; activating
    // only disjoint pairs keeps D block-diagonal, hence unitary and exactly
    // banded after any number of passes.
    struct Candidate {
      double gain;
      std::size_t i, delta;
      Rotation rot;
    };
    std::vector<Candidate> cands;
    for (std::size_t delta = 1; delta <= static_cast<std::size_t>(cfg.band_d);
         ++delta) {
      if (row_hi < delta) break;
      for (std::size_t i = row_lo; i + delta <= row_hi; ++i) {
        const std::size_t j = i + delta;
        if (owner[i] >= 0 || owner[j] >= 0) continue;
        pd.gather(y, i, j);
        const Rotation rot = best_rotation(pd, rho);
        const double gain = pd.baseline(rho) - rot.value;
        if (gain > kRelGain * total) cands.push_back({gain, i, delta, rot});
      }
    }
    std::sort(cands.begin(), cands.end(),
              [](const Candidate& a, const Candidate& b) {
                if (a.gain != b.gain) return a.gain > b.gain;
                if (a.i != b.i) return a.i < b.i;
                return a.delta < b.delta;
              });
    for (const Candidate& c : cands) {
      const std::size_t j = c.i + c.delta;
      if (owner[c.i] >= 0 || owner[j] >= 0) continue;
      owner[c.i] = owner[j] = static_cast<int>(active.size());
      active.push_back({c.i, j});
      apply_rotation(y, c.i, j, c.rot.theta, c.rot.phi);
      apply_rotation(d, c.i, j, c.rot.theta, c.rot.phi);
      total -= c.gain;
      changed = true;
    }

    const double obj = true_l11();
    if (obj < best_obj) {
      best_obj = obj;
      best_d = d;
    }
    if (!changed) break;
  }

  report.iterations = passes;
  report.final_l11 = best_obj;
  return Deformation(std::move(best_d), cfg.band_d, report);
}

namespace detail {

void apply_deformation_into(const Deformation& d, const cplx* in, cplx* out,
                            std::size_t num_frames) {
  const auto& m = d.matrix();
  const std::size_t dim = d.dim();
  const auto band = static_cast<std::size_t>(d.band());
  for (std::size_t i = 0; i < dim; ++i) {
    cplx* row = out + i * num_frames;
    if (d.row_is_identity(i)) {
      std::memcpy(row, in + i * num_frames, num_frames * sizeof(cplx));
      continue;
    }
    std::fill(row, row + num_frames, cplx(0.0, 0.0));
    const std::size_t j_lo = i > band ? i - band : 0;
    const std::size_t j_hi = std::min(dim - 1, i + band);
    for (std::size_t j = j_lo; j <= j_hi; ++j) {
      const cplx w = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (w == 0.0) continue;
      const cplx* src = in + j * num_frames;
      for (std::size_t k = 0; k < num_frames; ++k) row[k] += w * src[k];
    }
  }
}

void apply_deformation_adjoint_into(const Deformation& d, const cplx* in,
                                    cplx* out, std::size_t num_frames) {
  const auto& m = d.matrix();
  const std::size_t dim = d.dim();
  const auto band = static_cast<std::size_t>(d.band());
  for (std::size_t i = 0; i < dim; ++i) {
    cplx* row = out + i * num_frames;
    if (d.col_is_identity(i)) {
      std::memcpy(row, in + i * num_frames, num_frames * sizeof(cplx));
      continue;
    }
    std::fill(row, row + num_frames, cplx(0.0, 0.0));
    const std::size_t j_lo = i > band ? i - band : 0;
    const std::size_t j_hi = std::min(dim - 1, i + band);
    for (std::size_t j = j_lo; j <= j_hi; ++j) {
      const cplx w = std::conj(
          m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)));
      if (w == 0.0) continue;
      const cplx* src = in + j * num_frames;
      for (std::size_t k = 0; k < num_frames; ++k) row[k] += w * src[k];
    }
  }
}

}  // namespace detail

namespace {

CoefficientGrid apply_banded(const Deformation& d, const CoefficientGrid& grid,
                             bool adjoint) {
  if (d.dim() != grid.num_bins)
    throw std::invalid_argument("deformation: grid bin count mismatch");
  if (grid.values.size() != grid.num_frames * grid.num_bins)
    throw std::invalid_argument("deformation: malformed grid");
  CoefficientGrid out;
  out.num_frames = grid.num_frames;
  out.num_bins = grid.num_bins;
  out.sample_rate = grid.sample_rate;
  out.values.resize(grid.values.size());
  if (adjoint)
    detail::apply_deformation_adjoint_into(d, grid.values.data(),
                                           out.values.data(), grid.num_frames);
  else
    detail::apply_deformation_into(d, grid.values.data(), out.values.data(),
                                   grid.num_frames);
  return out;
}

}  // namespace

CoefficientGrid apply_deformation(const Deformation& d,
                                  const CoefficientGrid& grid) {
  return apply_banded(d, grid, false);
}

CoefficientGrid apply_deformation_adjoint(const Deformation& d,
                                          const CoefficientGrid& grid) {
  return apply_banded(d, grid, true);
}

namespace {

constexpr char kMagic[8] = {'A', 'I', 'N', 'P', 'D', 'E', 'F', '1'};

template <typename T>
void write_pod(std::ofstream& f, const T& v) {
  f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_pod(std::ifstream& f, T& v) {
  f.read(reinterpret_cast<char*>(&v), sizeof(T));
}

}  // namespace

void save_deformation(const Deformation& d, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path);
  f.write(kMagic, sizeof(kMagic));
  const auto dim = static_cast<std::uint64_t>(d.dim());
  const auto band = static_cast<std::int64_t>(d.band());
  const auto iters = static_cast<std::int64_t>(d.report().iterations);
  write_pod(f, dim);
  write_pod(f, band);
  write_pod(f, iters);
  write_pod(f, d.report().initial_l11);
  write_pod(f, d.report().final_l11);
  const auto& m = d.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      write_pod(f, m(i, j).real());
      write_pod(f, m(i, j).imag());
    }
  if (!f) throw IoError("write failed: " + path);
}

Deformation load_deformation(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open: " + path);
  char magic[8];
  f.read(magic, sizeof(magic));
  if (!f || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw IoError("not a deformation file: " + path);
  std::uint64_t dim = 0;
  std::int64_t band = 0;
  std::int64_t iters = 0;
  LearnReport report;
  read_pod(f, dim);
  read_pod(f, band);
  read_pod(f, iters);
  read_pod(f, report.initial_l11);
  read_pod(f, report.final_l11);
  if (!f || dim == 0 || dim > (1u << 24) || band < 0 ||
      static_cast<std::uint64_t>(band) >= dim + 1)
    throw IoError("corrupt deformation header: " + path);
  report.iterations = static_cast<int>(iters);
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(dim),
                     static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      double re = 0.0, im = 0.0;
      read_pod(f, re);
      read_pod(f, im);
      m(i, j) = cplx(re, im);
    }
  if (!f) throw IoError("truncated deformation file: " + path);
  Deformation d(std::move(m), static_cast<int>(band), report);
  d.validate();
  return d;
}

}  // namespace ainp
