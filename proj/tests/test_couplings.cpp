#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "infoest/coupling.hpp"
#include "infoest/montecarlo.hpp"

using namespace infoest;

namespace {

const TimeGrid kSnrGrid = make_uniform_grid(0.0, 1.0, 64);

}  // namespace

TEST_CASE("bm coupling with zero input is the noise path") {
  CounterRng rng({1, 0});
  const CouplingSample s = simulate_bm_coupling(0.0, kSnrGrid, rng);
  CHECK(s.y.values == s.noise.values);
  CHECK(s.y[0] == 0.0);
}

TEST_CASE("bm coupling rejects grids not starting at zero") {
  CounterRng rng({1, 0});
  CHECK_THROWS_AS(simulate_bm_coupling(0.0, make_uniform_grid(0.5, 1.0, 8), rng),
                  std::invalid_argument);
}

TEST_CASE("bm coupling marginals satisfy the channel condition") {
  // Y_g / sqrt(g) - sqrt(g) x ~ N(0,1) at g = 0.5 and g = 1, KS below the 1%
  // critical value 1.628 / sqrt(n).
  const int n = 100000;
  std::vector<double> pivot_half(n), pivot_one(n);
  for (int i = 0; i < n; ++i) {
    CounterRng rng({7, static_cast<std::uint64_t>(i)});
    const double x = 0.7;
    const CouplingSample s = simulate_bm_coupling(x, kSnrGrid, rng);
    const int k_half = 32, k_one = 64;
    pivot_half[i] = s.y[k_half] / std::sqrt(0.5) - std::sqrt(0.5) * x;
    pivot_one[i] = s.y[k_one] / std::sqrt(1.0) - std::sqrt(1.0) * x;
  }
  const double crit = 1.628 / std::sqrt(static_cast<double>(n));
  CHECK(ks_statistic_vs_standard_normal(pivot_half) < crit);
  CHECK(ks_statistic_vs_standard_normal(pivot_one) < crit);
}

TEST_CASE("additive coupling shares one noise across levels") {
  CounterRng rng({2, 0});
  const CouplingSample s = simulate_additive_gaussian_coupling(1.3, kSnrGrid, rng);
  for (int k = 0; k <= 64; ++k) {
    const double recovered = s.y[k] - std::sqrt(kSnrGrid.point(k)) * 1.3;
    CHECK(recovered == doctest::Approx(s.noise[0]).epsilon(1e-12));
  }
  CounterRng rng2({2, 1});
  const CouplingSample z = simulate_additive_gaussian_coupling(0.0, kSnrGrid, rng2);
  CHECK((z.y.values.array() == z.y[0]).all());
}

TEST_CASE("additive coupling marginal at snr 1 is N(x, 1)") {
  const int n = 100000;
  std::vector<double> pivot(n);
  for (int i = 0; i < n; ++i) {
    CounterRng rng({8, static_cast<std::uint64_t>(i)});
    const CouplingSample s = simulate_additive_gaussian_coupling(-0.4, kSnrGrid, rng);
    pivot[i] = s.y[64] - std::sqrt(1.0) * (-0.4);
  }
  CHECK(ks_statistic_vs_standard_normal(pivot) < 1.628 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("independent coupling block structure") {
  CounterRng rng({3, 0});
  const CouplingSample s = simulate_independent_coupling(0.5, 1.0, 4, rng);
  CHECK(s.y.n_steps() == 4);
  CHECK(s.y.grid.t1 == 1.0);

  SUBCASE("single block reduces to the additive coupling") {
    CounterRng r1({4, 9});
    const CouplingSample one = simulate_independent_coupling(0.5, 1.0, 1, r1);
    CounterRng r2({4, 9});
    const CouplingSample add = simulate_additive_gaussian_coupling(0.5, one.y.grid, r2);
    CHECK(one.y.values == add.y.values);
  }
  SUBCASE("zero blocks rejected") {
    CounterRng r({4, 0});
    CHECK_THROWS_AS(simulate_independent_coupling(0.5, 1.0, 0, r), std::invalid_argument);
  }
}

TEST_CASE("adjacent blocks carry independent noise") {
  const int n = 100000;
  MomentAccumulator prod;
  std::vector<double> endpoint(n);
  for (int i = 0; i < n; ++i) {
    CounterRng rng({9, static_cast<std::uint64_t>(i)});
    const CouplingSample s = simulate_independent_coupling(0.25, 1.0, 4, rng);
    prod.add(s.noise[1] * s.noise[2]);
    endpoint[i] = s.y[2] - std::sqrt(0.5) * 0.25;  // block-2 endpoint pivot
  }
  CHECK(within_sigma(prod.stats().mean, 0.0, prod.stats().std_error_mean));
  CHECK(ks_statistic_vs_standard_normal(endpoint) <
        1.628 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("coupling posterior means reduce to the right scalar observations") {
  const ScalarPrior g = ScalarPrior::gaussian(0.0, 1.0);
  SUBCASE("bm coupling at gamma 1 with endpoint 1") {
    CounterRng rng({5, 0});
    CouplingSample s = simulate_bm_coupling(1.0, kSnrGrid, rng);
    s.y.values[64] = 1.0;  // pin the endpoint: E[X|Y_1 = 1] = 1/2
    CHECK(coupling_posterior_mean(g, s, 64) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(coupling_posterior_mean(g, s, 0) == doctest::Approx(0.0));
  }
  SUBCASE("additive coupling uses the point observation") {
    const ScalarPrior tp = ScalarPrior::two_point(-1.0, 1.0, 0.5);
    CounterRng rng({5, 1});
    CouplingSample s = simulate_additive_gaussian_coupling(1.0, kSnrGrid, rng);
    s.y.values[64] = 1.0;
    CHECK(coupling_posterior_mean(tp, s, 64) ==
          doctest::Approx(std::tanh(1.0)).epsilon(1e-12));
  }
  SUBCASE("gamma 0 returns the prior mean for every coupling") {
    const ScalarPrior shifted = ScalarPrior::gaussian(0.7, 2.0);
    CounterRng rng({5, 2});
    const CouplingSample s = simulate_bm_coupling(-2.0, kSnrGrid, rng);
    CHECK(coupling_posterior_mean(shifted, s, 0) == doctest::Approx(0.7));
  }
}

TEST_CASE("bm endpoint filter agrees with a fine discrete Bayes over the path") {
  // Numerical posterior from the whole discrete path (grid over x) against the
  // endpoint sufficient statistic, Gaussian prior: agreement to 1e-8.
  const TimeGrid grid = make_uniform_grid(0.0, 1.0, 256);
  const ScalarPrior g = ScalarPrior::gaussian(0.0, 1.0);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    CounterRng rng({6, seed});
    const double x_true = g.sample(rng);
    const CouplingSample s = simulate_bm_coupling(x_true, grid, rng);

    // Path log-likelihood of candidate x: sum x dY - x^2 g / 2 telescopes, but
    // evaluate it as the full increment sum on purpose.
    auto loglik = [&](double x) {
      double acc = 0.0;
      for (int k = 0; k < 256; ++k) {
        acc += x * (s.y[k + 1] - s.y[k]) - 0.5 * x * x * grid.step();
      }
      return acc;
    };
    const int m = 4001;
    double num = 0.0, den = 0.0;
    for (int j = 0; j < m; ++j) {
      const double x = -8.0 + 16.0 * j / (m - 1);
      const double w = std::exp(loglik(x) - 0.5 * x * x);
      num += x * w;
      den += w;
    }
    const double bayes = num / den;
    const double endpoint = coupling_posterior_mean(g, s, 256);
    CHECK(bayes == doctest::Approx(endpoint).epsilon(1e-8));
  }
}
