#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "infoest/brownian.hpp"
#include "infoest/densities.hpp"
#include "infoest/filters.hpp"
#include "infoest/montecarlo.hpp"

using namespace infoest;

TEST_CASE("conditional exponent basics") {
  const TimeGrid grid = make_uniform_grid(0.0, 1.0, 128);
  CounterRng rng({31, 0});
  const SamplePath w = sample_brownian(grid, rng);

  const SamplePath zero(grid, Eigen::VectorXd::Zero(129));
  CHECK(log_rn_conditional(zero, w).value == 0.0);

  const SamplePath c(grid, Eigen::VectorXd::Constant(129, 1.7));
  CHECK(log_rn_conditional(c, w).value ==
        doctest::Approx(1.7 * w.back() - 0.5 * 1.7 * 1.7).epsilon(1e-12));

  const SamplePath other(make_uniform_grid(0.0, 2.0, 128), Eigen::VectorXd::Zero(129));
  CHECK_THROWS_AS(log_rn_conditional(c, other), std::invalid_argument);
}

TEST_CASE("exponential of the conditional exponent is a mean-one martingale") {
  // Bounded deterministic integrand on pure noise: E[exp(...)] = 1 exactly per
  // increment, so the Monte Carlo mean sits within 4 SE of 1.
  const TimeGrid grid = make_uniform_grid(0.0, 1.0, 64);
  Eigen::VectorXd h(65);
  for (int k = 0; k <= 64; ++k) h[k] = std::sin(3.0 * grid.point(k));
  const SamplePath integrand(grid, h);
  MomentAccumulator acc;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const SamplePath w = sample_brownian(grid, RngSeed{32, static_cast<std::uint64_t>(i)});
    acc.add(std::exp(log_rn_conditional(integrand, w).value));
  }
  CHECK(within_sigma(acc.stats().mean, 1.0, acc.stats().std_error_mean));
}

TEST_CASE("information density is zero for a deterministic signal") {
  const TimeGrid grid = make_uniform_grid(0.0, 1.0, 64);
  CounterRng rng({33, 0});
  const SamplePath w = sample_brownian(grid, rng);
  const SamplePath x(grid, Eigen::VectorXd::Constant(65, 0.9));
  const SamplePath y = simulate_channel(x, w);
  // Point-mass prior: the causal estimate equals the signal pathwise.
  const FilterOutput f = causal_filter_constant_x(ScalarPrior::point_mass(0.9), y);
  CHECK(information_density(x, y, f.estimate).value == 0.0);
}

TEST_CASE("deterministic prior makes marginal equal conditional") {
  const TimeGrid grid = make_uniform_grid(0.0, 1.0, 64);
  CounterRng rng({34, 0});
  const SamplePath w = sample_brownian(grid, rng);
  const SamplePath x(grid, Eigen::VectorXd::Constant(65, -0.4));
  const SamplePath y = simulate_channel(x, w);
  const FilterOutput f = causal_filter_constant_x(ScalarPrior::point_mass(-0.4), y);
  CHECK(log_rn_marginal(f.estimate, y).value ==
        doctest::Approx(log_rn_conditional(x, y).value).epsilon(1e-15));
}

TEST_CASE("mean information density recovers the mutual information") {
  // Constant standard normal input over [0,1]: I = log(2)/2.
  const TimeGrid grid = make_uniform_grid(0.0, 1.0, 512);
  const ScalarPrior g = ScalarPrior::gaussian(0.0, 1.0);
  MomentAccumulator acc;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    CounterRng rng({35, static_cast<std::uint64_t>(i)});
    const SamplePath x(grid, Eigen::VectorXd::Constant(513, g.sample(rng)));
    const SamplePath w = sample_brownian(grid, rng);
    const SamplePath y = simulate_channel(x, w);
    const FilterOutput f = causal_filter_constant_x(g, y);
    acc.add(information_density(x, y, f.estimate).value);
  }
  CHECK(within_sigma(acc.stats().mean, 0.5 * std::log(2.0), acc.stats().std_error_mean));
}

TEST_CASE("mismatch exponent: matched laws give zero, gaussian pair gives the KL") {
  const TimeGrid grid = make_uniform_grid(0.0, 1.0, 512);
  const ScalarPrior p = ScalarPrior::gaussian(0.0, 1.0);
  const ScalarPrior q = ScalarPrior::gaussian(0.0, 2.0);

  CounterRng rng0({36, 999});
  const SamplePath x0(grid, Eigen::VectorXd::Constant(513, p.sample(rng0)));
  const SamplePath w0 = sample_brownian(grid, rng0);
  const SamplePath y0 = simulate_channel(x0, w0);
  const FilterOutput f0 = causal_filter_constant_x(p, y0);
  CHECK(mismatch_log_rn(f0.estimate, f0.estimate, y0).value == 0.0);

  MomentAccumulator kl, norm;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    CounterRng rng({36, static_cast<std::uint64_t>(i)});
    const SamplePath x(grid, Eigen::VectorXd::Constant(513, p.sample(rng)));
    const SamplePath w = sample_brownian(grid, rng);
    const SamplePath y = simulate_channel(x, w);
    const double v = mismatch_log_rn(causal_filter_constant_x(p, y).estimate,
                                     causal_filter_constant_x(q, y).estimate, y)
                         .value;
    kl.add(v);
    norm.add(std::exp(-v));
  }
  // Output laws at T = 1 are N(0,2) and N(0,3): KL = (2/3 - 1 + log(3/2)) / 2.
  const double target = 0.5 * (2.0 / 3.0 - 1.0 + std::log(1.5));
  CHECK(within_sigma(kl.stats().mean, target, kl.stats().std_error_mean));
  // Change-of-measure normalization E_P[exp(-value)] = 1.
  CHECK(within_sigma(norm.stats().mean, 1.0, norm.stats().std_error_mean));
}

TEST_CASE("closed-form scalar density") {
  CHECK(closed_form_info_density_gaussian_scalar(0.0, 0.0, 1.0).value ==
        doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(closed_form_info_density_gaussian_scalar(0.0, 0.0, 0.0),
                  std::invalid_argument);
  // snr -> 0+ limit vanishes (at rate sqrt(snr) through the drift term).
  CHECK(std::abs(closed_form_info_density_gaussian_scalar(0.3, 0.2, 1e-12).value) <
        2.0 * 0.3 * 0.2 * 1e-6);
  CHECK(std::abs(closed_form_info_density_gaussian_scalar(0.3, 0.2, 1e-16).value) <
        2.0 * 0.3 * 0.2 * 1e-8);

  // Expectation over (X, N) at snr 1 is the mutual information log(2)/2.
  CounterRng rng({37, 0});
  MomentAccumulator acc;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    const double noise = rng.normal();
    acc.add(closed_form_info_density_gaussian_scalar(x, x + noise, 1.0).value);
  }
  CHECK(within_sigma(acc.stats().mean, 0.5 * std::log(2.0), acc.stats().std_error_mean));

  // E[I1 | X] closed form integrates the same way.
  CHECK(closed_form_info_density_conditional_mean(1.0, 1.0) ==
        doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-15));
  CHECK(closed_form_info_density_conditional_mean(0.0, 1.0) ==
        doctest::Approx(0.5 * std::log(2.0) - 0.25).epsilon(1e-15));
}

TEST_CASE("algebraic closure of conditional minus marginal") {
  // conditional - marginal rebuilt as (1/2) int (X - X̂)^2 dt + int (X - X̂) dW
  // from the same sums closes to <= 1e-9 relative.
  const TimeGrid grid = make_uniform_grid(0.0, 1.0, 4096);
  const ScalarPrior g = ScalarPrior::gaussian(0.0, 1.0);
  for (std::uint64_t s = 0; s < 50; ++s) {
    CounterRng rng({38, s});
    const SamplePath x(grid, Eigen::VectorXd::Constant(4097, g.sample(rng)));
    const SamplePath w = sample_brownian(grid, rng);
    const SamplePath y = simulate_channel(x, w);
    const FilterOutput f = causal_filter_constant_x(g, y);
    const double density = information_density(x, y, f.estimate).value;
    double err = 0.0, ito = 0.0;
    for (int k = 0; k < 4096; ++k) {
      const double resid = x[k] - f.estimate[k];
      err += resid * resid * grid.step();
      ito += resid * (w[k + 1] - w[k]);
    }
    const double rebuilt = 0.5 * err + ito;
    CHECK(std::abs(density - rebuilt) <= 1e-9 * (1.0 + std::abs(density)));
  }
}
