#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "infoest/brownian.hpp"
#include "infoest/grid.hpp"
#include "infoest/integrate.hpp"
#include "infoest/montecarlo.hpp"
#include "infoest/rng.hpp"

using namespace infoest;

TEST_CASE("uniform grid has exact affine points") {
  const TimeGrid g = make_uniform_grid(0.0, 1.0, 4);
  CHECK(g.point(0) == 0.0);
  CHECK(g.point(1) == 0.25);
  CHECK(g.point(2) == 0.5);
  CHECK(g.point(3) == 0.75);
  CHECK(g.point(4) == 1.0);

  const TimeGrid fine = make_uniform_grid(0.0, 2.0, 1 << 16);
  CHECK(fine.step() == 2.0 / 65536.0);
  // No cumulative drift: far points are still exactly affine.
  CHECK(fine.point(65536) == 2.0);
  CHECK(fine.point(32768) == 1.0);
}

TEST_CASE("degenerate grids are rejected") {
  CHECK_THROWS_AS(make_uniform_grid(0.0, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_uniform_grid(1.0, 0.5, 4), std::invalid_argument);
  CHECK_THROWS_AS(make_uniform_grid(0.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("sample path length must match grid") {
  CHECK_THROWS_AS(SamplePath(make_uniform_grid(0.0, 1.0, 4), Eigen::VectorXd::Zero(4)),
                  std::invalid_argument);
}

TEST_CASE("counter rng reproduces streams and separates them") {
  CounterRng a({42, 7});
  CounterRng b({42, 7});
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  CounterRng c({42, 8});
  int equal = 0;
  CounterRng a2({42, 7});
  for (int i = 0; i < 64; ++i) equal += (a2.next_u64() == c.next_u64());
  CHECK(equal == 0);
}

TEST_CASE("normals have the right first moments") {
  CounterRng rng({1234, 0});
  MomentAccumulator acc;
  const int n = 200000;
  for (int i = 0; i < n; ++i) acc.add(rng.normal());
  const EstimatorStats s = acc.stats();
  CHECK(within_sigma(s.mean, 0.0, s.std_error_mean));
  CHECK(within_sigma(s.variance, 1.0, s.std_error_variance));
}

TEST_CASE("brownian endpoint variance matches the grid length") {
  const TimeGrid g = make_uniform_grid(0.0, 4.0, 4);
  MomentAccumulator acc;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    acc.add(sample_brownian(g, RngSeed{5, static_cast<std::uint64_t>(i)}).back());
  }
  const EstimatorStats s = acc.stats();
  CHECK(within_sigma(s.mean, 0.0, s.std_error_mean));
  CHECK(within_sigma(s.variance, 4.0, s.std_error_variance, 3.0));
}

TEST_CASE("same seed reproduces the path bit for bit") {
  const TimeGrid g = make_uniform_grid(0.0, 1.0, 64);
  const SamplePath p1 = sample_brownian(g, RngSeed{9, 3});
  const SamplePath p2 = sample_brownian(g, RngSeed{9, 3});
  CHECK(p1.values == p2.values);
  CHECK(p1[0] == 0.0);
}

TEST_CASE("ito integral basics") {
  const TimeGrid g = make_uniform_grid(0.0, 1.0, 128);
  const SamplePath w = sample_brownian(g, RngSeed{11, 0});
  const SamplePath zero(g, Eigen::VectorXd::Zero(g.n_points()));
  CHECK(ito_integral(zero, w) == 0.0);

  const SamplePath c(g, Eigen::VectorXd::Constant(g.n_points(), 2.5));
  CHECK(ito_integral(c, w) == doctest::Approx(2.5 * w.back()).epsilon(1e-12));

  const SamplePath other(make_uniform_grid(0.0, 2.0, 128), Eigen::VectorXd::Zero(129));
  CHECK_THROWS_AS(ito_integral(c, other), std::invalid_argument);
}

TEST_CASE("ito isometry for H = W on [0,1]") {
  const TimeGrid g = make_uniform_grid(0.0, 1.0, 256);
  MomentAccumulator acc;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const SamplePath w = sample_brownian(g, RngSeed{21, static_cast<std::uint64_t>(i)});
    acc.add(ito_integral(w, w));
  }
  const EstimatorStats s = acc.stats();
  CHECK(within_sigma(s.mean, 0.0, s.std_error_mean));
  // Var(int W dW) = int t dt = 1/2 (up to O(step) discretization).
  CHECK(within_sigma(s.variance, 0.5, s.std_error_variance));
}

TEST_CASE("lebesgue integral uses the left rule") {
  const TimeGrid g = make_uniform_grid(0.0, 1.0, 4);
  Eigen::VectorXd v(5);
  for (int k = 0; k <= 4; ++k) v[k] = g.point(k);
  CHECK(lebesgue_integral(SamplePath(g, v)) == doctest::Approx(0.375).epsilon(1e-15));

  const SamplePath ones(g, Eigen::VectorXd::Ones(5));
  CHECK(lebesgue_integral(ones) == doctest::Approx(1.0).epsilon(1e-15));

  // Riemann convergence at rate O(step).
  const TimeGrid fine = make_uniform_grid(0.0, 1.0, 1 << 14);
  Eigen::VectorXd vf(fine.n_points());
  for (int k = 0; k < fine.n_points(); ++k) vf[k] = fine.point(k);
  CHECK(lebesgue_integral(SamplePath(fine, vf)) == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("martingale increments vanish against the past") {
  const TimeGrid g = make_uniform_grid(0.0, 1.0, 64);
  const int n = 50000;
  MomentAccumulator plain, against;
  for (int i = 0; i < n; ++i) {
    const SamplePath w = sample_brownian(g, RngSeed{33, static_cast<std::uint64_t>(i)});
    // Adapted integrand H = clipped W; restriction to (1/2, 1].
    double head = 0.0, tail = 0.0;
    for (int k = 0; k < 64; ++k) {
      const double h = std::clamp(w[k], -1.0, 1.0);
      const double dw = w[k + 1] - w[k];
      (k < 32 ? head : tail) += h * dw;
    }
    const double past = std::clamp(w[32], -1.0, 1.0);
    plain.add(tail);
    against.add(tail * past);
    (void)head;
  }
  CHECK(within_sigma(plain.stats().mean, 0.0, plain.stats().std_error_mean));
  CHECK(within_sigma(against.stats().mean, 0.0, against.stats().std_error_mean));
}

TEST_CASE("sheet rectangle sums have the product variance and covariance") {
  const TimeGrid tg = make_uniform_grid(0.0, 1.0, 8);
  const TimeGrid gg = make_uniform_grid(0.0, 1.0, 8);
  MomentAccumulator full, cross;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const BrownianSheetGrid sheet = sample_sheet(tg, gg, RngSeed{44, static_cast<std::uint64_t>(i)});
    const double w11 = sheet.value(8, 8);
    const double w_half = sheet.value(8, 4);
    full.add(w11);
    cross.add(w_half * w11);  // E = min(t,t') min(g,g') = 0.5
  }
  CHECK(within_sigma(full.stats().variance, 1.0, full.stats().std_error_variance));
  CHECK(within_sigma(cross.stats().mean, 0.5, cross.stats().std_error_mean));
}

TEST_CASE("sheet slices at zero are zero and level increments are independent") {
  const TimeGrid tg = make_uniform_grid(0.0, 1.0, 8);
  const TimeGrid gg = make_uniform_grid(0.0, 2.0, 8);
  const BrownianSheetGrid sheet = sample_sheet(tg, gg, RngSeed{45, 0});
  for (int i = 0; i <= 8; ++i) CHECK(sheet.value(i, 0) == 0.0);
  for (int j = 0; j <= 8; ++j) CHECK(sheet.value(0, j) == 0.0);

  // corr(W^{(g1)}, W^{(g2)} - W^{(g1)}) ~ 0 across seeds.
  MomentAccumulator prod;
  const int n = 50000;
  for (int i = 0; i < n; ++i) {
    const BrownianSheetGrid s = sample_sheet(tg, gg, RngSeed{46, static_cast<std::uint64_t>(i)});
    const double lo = s.value(8, 4);
    const double hi = s.value(8, 8);
    prod.add(lo * (hi - lo));
  }
  CHECK(within_sigma(prod.stats().mean, 0.0, prod.stats().std_error_mean));
}
