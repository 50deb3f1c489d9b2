#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "ainp/errors.hpp"
#include "ainp/gabor.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using ainp::cplx;
using ainp::CoefficientGrid;
using ainp::GaborFrame;
using ainp::Signal;

namespace {

Signal make_signal(std::vector<double> v, int fs = 44100) {
  Signal s;
  s.samples = std::move(v);
  s.sample_rate = fs;
  return s;
}

double norm2(const std::vector<double>& v) {
  return std::sqrt(oracle::dot(v, v));
}

// Small frame every oracle can afford: L = 16, a = 4, M = 8, Hann length 8.
GaborFrame small_tight_frame() {
  return ainp::make_tight(GaborFrame(ainp::make_hann_window(8), 4, 8, 16));
}

}  // namespace

TEST_CASE("hann window closed forms") {
  const auto w4 = ainp::make_hann_window(4);
  REQUIRE(w4.size() == 4);
  CHECK(w4[0] == 0.0);
  CHECK(w4[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(w4[2] == 1.0);
  CHECK(w4[3] == doctest::Approx(0.5).epsilon(1e-15));

  const auto w2 = ainp::make_hann_window(2);
  CHECK(w2[0] == 0.0);
  CHECK(w2[1] == 1.0);

  CHECK_THROWS_AS(ainp::make_hann_window(1), std::invalid_argument);
  CHECK_THROWS_AS(ainp::make_hann_window(0), std::invalid_argument);
}

TEST_CASE("hann window energy") {
  // sum w[k]^2 = 3 len / 8 for the periodic window; 2800 gives 1050.
  const auto w = ainp::make_hann_window(2800);
  double e = 0.0;
  for (double v : w) e += v * v;
  CHECK(e == doctest::Approx(1050.0).epsilon(1e-9));
}

TEST_CASE("tight normalization of a rectangular window") {
  // Ones of length 4 with hop 2: overlap sum is 2 everywhere, so the tight
  // window is 1/sqrt(2) at every tap.
  GaborFrame f(std::vector<double>(4, 1.0), 2, 4, 8);
  const auto t = ainp::make_tight(f);
  REQUIRE(t.window().size() == 4);
  for (double v : t.window())
    CHECK(v == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(t.is_tight());
}

TEST_CASE("make_tight is idempotent") {
  GaborFrame f(ainp::make_hann_window(8), 4, 8, 16);
  const auto t1 = ainp::make_tight(f);
  const auto t2 = ainp::make_tight(t1);
  REQUIRE(t1.window().size() == t2.window().size());
  for (std::size_t k = 0; k < t1.window().size(); ++k)
    CHECK(t1.window()[k] == t2.window()[k]);  // bit-exact
}

TEST_CASE("tight window overlap sum is one") {
  // The benchmark geometry: Hann 2800, hop 700, 2800 modulations.
  const std::size_t a = 700, L = 2800 * 4;
  const auto t = ainp::make_tight(GaborFrame(ainp::make_hann_window(2800), a,
                                             2800, L));
  for (std::size_t l = 0; l < L; l += 97) {
    double s = 0.0;
    for (std::size_t n = 0; n < t.num_frames(); ++n) {
      const double w = oracle::window_at(t, n, l);
      s += w * w;
    }
    CHECK(std::abs(s - 1.0) <= 1e-12);
  }
  CHECK(t.is_tight());
  CHECK(t.frame_bound() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("frame construction rejects bad geometry") {
  // hop must divide L, modulations must divide L, painless case w_g <= M.
  CHECK_THROWS_AS(GaborFrame(ainp::make_hann_window(8), 3, 8, 16),
                  std::invalid_argument);
  CHECK_THROWS_AS(GaborFrame(ainp::make_hann_window(8), 4, 5, 16),
                  std::invalid_argument);
  CHECK_THROWS_AS(GaborFrame(ainp::make_hann_window(8), 4, 4, 16),
                  std::invalid_argument);
  // make_tight rejects hop > window length (coverage holes).
  CHECK_THROWS_AS(ainp::make_tight(GaborFrame(ainp::make_hann_window(4), 8,
                                              16, 32)),
                  std::invalid_argument);
  // a window that is identically zero has no tight rescaling
  CHECK_THROWS_AS(ainp::make_tight(GaborFrame(std::vector<double>(8, 0.0), 4,
                                              8, 16)),
                  ainp::NotAFrameError);
}

TEST_CASE("analysis of an impulse matches the double sum") {
  const auto f = small_tight_frame();
  std::vector<double> x(16, 0.0);
  x[3] = 1.0;
  const auto got = ainp::analyze(f, make_signal(x));
  const auto want = oracle::dgt_half(f, x);
  REQUIRE(got.num_bins == static_cast<std::size_t>(want.rows()));
  REQUIRE(got.num_frames == static_cast<std::size_t>(want.cols()));
  for (std::size_t m = 0; m < got.num_bins; ++m)
    for (std::size_t n = 0; n < got.num_frames; ++n)
      CHECK(std::abs(got.at(m, n) - want(static_cast<Eigen::Index>(m),
                                         static_cast<Eigen::Index>(n))) <=
            1e-12);
}

TEST_CASE("analysis of a random signal matches the double sum") {
  const auto f = small_tight_frame();
  std::mt19937_64 rng(7);
  const auto x = oracle::random_signal(16, rng);
  const auto got = ainp::analyze(f, make_signal(x));
  const auto want = oracle::dgt_half(f, x);
  for (std::size_t m = 0; m < got.num_bins; ++m)
    for (std::size_t n = 0; n < got.num_frames; ++n)
      CHECK(std::abs(got.at(m, n) - want(static_cast<Eigen::Index>(m),
                                         static_cast<Eigen::Index>(n))) <=
            1e-12);
}

TEST_CASE("analysis basics") {
  const auto f = small_tight_frame();
  std::mt19937_64 rng(11);
  const auto x = oracle::random_signal(16, rng);

  SUBCASE("zero in, zero out") {
    const auto c = ainp::analyze(f, make_signal(std::vector<double>(16, 0.0)));
    for (const auto& v : c.values) CHECK(v == cplx{0.0});
  }
  SUBCASE("DC row is real") {
    const auto c = ainp::analyze(f, make_signal(x));
    for (std::size_t n = 0; n < c.num_frames; ++n)
      CHECK(c.at(0, n).imag() == 0.0);
  }
  SUBCASE("linearity") {
    const auto y = oracle::random_signal(16, rng);
    std::vector<double> mix(16);
    for (std::size_t l = 0; l < 16; ++l) mix[l] = 2.5 * x[l] - 0.75 * y[l];
    const auto cx = ainp::analyze(f, make_signal(x));
    const auto cy = ainp::analyze(f, make_signal(y));
    const auto cm = ainp::analyze(f, make_signal(mix));
    for (std::size_t p = 0; p < cm.size(); ++p)
      CHECK(std::abs(cm.values[p] - (2.5 * cx.values[p] -
                                     0.75 * cy.values[p])) <= 1e-12);
  }
  SUBCASE("length mismatch is rejected") {
    CHECK_THROWS_AS(ainp::analyze(f, make_signal(std::vector<double>(15))),
                    std::invalid_argument);
  }
}

TEST_CASE("synthesis of the zero grid is the zero signal") {
  const auto f = small_tight_frame();
  CoefficientGrid c;
  c.num_bins = f.num_bins();
  c.num_frames = f.num_frames();
  c.values.assign(c.num_bins * c.num_frames, cplx{0.0});
  const auto y = ainp::synthesize(f, c);
  REQUIRE(y.size() == 16);
  for (double v : y.samples) CHECK(v == 0.0);
}

TEST_CASE("synthesize inverts analyze on tight frames") {
  std::mt19937_64 rng(23);
  SUBCASE("small frame") {
    const auto f = small_tight_frame();
    const auto x = oracle::random_signal(16, rng);
    const auto y = ainp::synthesize(f, ainp::analyze(f, make_signal(x)));
    double err = 0.0;
    for (std::size_t l = 0; l < 16; ++l)
      err = std::max(err, std::abs(y.samples[l] - x[l]));
    CHECK(err <= 1e-10 * norm2(x));
  }
  SUBCASE("benchmark frame") {
    const std::size_t L = 2800 * 4;
    const auto f = ainp::make_tight(
        GaborFrame(ainp::make_hann_window(2800), 700, 2800, L));
    const auto x = oracle::random_signal(L, rng);
    const auto y = ainp::synthesize(f, ainp::analyze(f, make_signal(x)));
    double num = 0.0, den = 0.0;
    for (std::size_t l = 0; l < L; ++l) {
      num += (y.samples[l] - x[l]) * (y.samples[l] - x[l]);
      den += x[l] * x[l];
    }
    CHECK(std::sqrt(num) <= 1e-10 * std::sqrt(den));
  }
}

TEST_CASE("synthesis matches the dense oracle") {
  const auto f = small_tight_frame();
  std::mt19937_64 rng(31);
  const auto c = oracle::random_grid(f.num_bins(), f.num_frames(), rng);
  const auto got = ainp::synthesize(f, c);
  const auto want = oracle::synth_half(f, oracle::grid_to_matrix(c));
  for (std::size_t l = 0; l < 16; ++l)
    CHECK(std::abs(got.samples[l] - want[l]) <= 1e-12);
}

TEST_CASE("synthesis of a single mid-bin coefficient") {
  // One unit coefficient at (m, n) = (1, 0) synthesizes to 2 Re(g_p) / M:
  // the conjugate extension mirrors it onto bin M-1, doubling the real part.
  const auto f = small_tight_frame();
  CoefficientGrid c;
  c.num_bins = f.num_bins();
  c.num_frames = f.num_frames();
  c.values.assign(c.num_bins * c.num_frames, cplx{0.0});
  c.at(1, 0) = 1.0;
  const auto got = ainp::synthesize(f, c);
  const auto g = ainp::atom(f, 0 + 1 * f.num_frames());
  const double scale = 2.0 / static_cast<double>(f.modulations());
  for (std::size_t l = 0; l < 16; ++l)
    CHECK(std::abs(got.samples[l] - scale * g[l].real()) <= 1e-13);
  // and the oracle agrees
  const auto want = oracle::synth_half(f, oracle::grid_to_matrix(c));
  for (std::size_t l = 0; l < 16; ++l)
    CHECK(std::abs(got.samples[l] - want[l]) <= 1e-13);
}

TEST_CASE("atoms") {
  const auto f = small_tight_frame();

  SUBCASE("p = 0 is the circularly shifted window") {
    const auto g = ainp::atom(f, 0);
    for (std::size_t l = 0; l < 16; ++l) {
      CHECK(g[l].real() == doctest::Approx(oracle::window_at(f, 0, l))
                               .epsilon(1e-15));
      CHECK(g[l].imag() == 0.0);
    }
  }
  SUBCASE("modulation changes only the phase") {
    for (std::size_t p = 0; p < f.num_coeffs(); p += 3) {
      const auto g = ainp::atom(f, p);
      const std::size_t n = p % f.num_frames();
      for (std::size_t l = 0; l < 16; ++l)
        CHECK(std::abs(std::abs(g[l]) -
                       std::abs(oracle::window_at(f, n, l))) <= 1e-15);
    }
  }
  SUBCASE("coefficients are inner products against atoms") {
    std::mt19937_64 rng(5);
    const auto x = oracle::random_signal(16, rng);
    std::vector<cplx> xc(x.begin(), x.end());
    const auto c = ainp::analyze(f, make_signal(x));
    for (std::size_t p = 0; p < f.num_coeffs(); ++p) {
      const auto g = ainp::atom(f, p);
      CHECK(std::abs(c.values[p] - oracle::cdot(g, xc)) <= 1e-12);
    }
  }
  SUBCASE("out of range p is rejected") {
    CHECK_THROWS_AS(ainp::atom(f, f.num_coeffs()), std::invalid_argument);
  }
}

TEST_CASE("full-spectrum energy identity for tight frames") {
  // sum over all M modulations of |c|^2 equals M ||x||^2 when the window
  // overlap sum is 1.
  const auto f = small_tight_frame();
  std::mt19937_64 rng(13);
  const auto x = oracle::random_signal(16, rng);
  const auto full = oracle::dgt_full(f, x);
  double coeff = 0.0;
  for (Eigen::Index j = 0; j < full.cols(); ++j)
    for (Eigen::Index i = 0; i < full.rows(); ++i)
      coeff += std::norm(full(i, j));
  const double want = static_cast<double>(f.modulations()) * oracle::dot(x, x);
  CHECK(coeff == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("full spectrum is conjugate symmetric for real input") {
  const auto f = small_tight_frame();
  std::mt19937_64 rng(17);
  const auto x = oracle::random_signal(16, rng);
  const auto full = oracle::dgt_full(f, x);
  const auto mods = static_cast<Eigen::Index>(f.modulations());
  for (Eigen::Index m = 1; m < mods; ++m)
    for (Eigen::Index n = 0; n < full.cols(); ++n)
      CHECK(std::abs(full(m, n) - std::conj(full(mods - m, n))) <= 1e-12);
}

TEST_CASE("synthesis is adjoint to analysis") {
  const auto f = small_tight_frame();
  std::mt19937_64 rng(19);
  const auto x = oracle::random_signal(16, rng);
  std::vector<cplx> xc(x.begin(), x.end());

  SUBCASE("full spectrum, unnormalized") {
    // <Ax, c> == <x, A* c> with A* the raw synthesis (no 1/M).
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXcd c(static_cast<Eigen::Index>(f.modulations()),
                       static_cast<Eigen::Index>(f.num_frames()));
    for (Eigen::Index j = 0; j < c.cols(); ++j)
      for (Eigen::Index i = 0; i < c.rows(); ++i)
        c(i, j) = cplx{u(rng), u(rng)};
    const auto ax = oracle::dgt_full(f, x);
    cplx lhs = 0.0;
    for (Eigen::Index j = 0; j < c.cols(); ++j)
      for (Eigen::Index i = 0; i < c.rows(); ++i)
        lhs += std::conj(ax(i, j)) * c(i, j);
    const auto rhs = oracle::cdot(xc, oracle::synth_full_raw(f, c));
    CHECK(std::abs(lhs - rhs) <= 1e-10);
  }
  SUBCASE("half spectrum with doubling weights") {
    // <x, synthesize(c)> == (1/M) sum_p wt_p Re(conj(analyze(x)_p) c_p)
    // where wt is 1 on the DC and Nyquist rows and 2 in between.
    const auto c = oracle::random_grid(f.num_bins(), f.num_frames(), rng);
    const auto cx = ainp::analyze(f, make_signal(x));
    const auto y = ainp::synthesize(f, c);
    const double lhs = oracle::dot(x, y.samples);
    double rhs = 0.0;
    for (std::size_t m = 0; m < f.num_bins(); ++m) {
      const bool edge = m == 0 || (f.has_nyquist_bin() && m + 1 == f.num_bins());
      const double wt = edge ? 1.0 : 2.0;
      for (std::size_t n = 0; n < f.num_frames(); ++n)
        rhs += wt * (std::conj(cx.at(m, n)) * c.at(m, n)).real();
    }
    rhs /= static_cast<double>(f.modulations());
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("odd modulation count has no nyquist bin") {
  // M = 5 on L = 20: M' = 3, every bin above DC doubles in the adjoint.
  GaborFrame f(ainp::make_hann_window(5), 2, 5, 20);
  CHECK(!f.has_nyquist_bin());
  CHECK(f.num_bins() == 3);
  const auto t = ainp::make_tight(f);
  std::mt19937_64 rng(29);
  const auto x = oracle::random_signal(20, rng);
  const auto got = ainp::analyze(t, make_signal(x));
  const auto want = oracle::dgt_half(t, x);
  for (std::size_t m = 0; m < got.num_bins; ++m)
    for (std::size_t n = 0; n < got.num_frames; ++n)
      CHECK(std::abs(got.at(m, n) - want(static_cast<Eigen::Index>(m),
                                         static_cast<Eigen::Index>(n))) <=
            1e-12);
  const auto y = ainp::synthesize(t, got);
  for (std::size_t l = 0; l < 20; ++l)
    CHECK(std::abs(y.samples[l] - x[l]) <= 1e-10);
}
