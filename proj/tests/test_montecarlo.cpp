#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "infoest/brownian.hpp"
#include "infoest/experiments.hpp"
#include "infoest/identities.hpp"
#include "infoest/integrate.hpp"
#include "infoest/montecarlo.hpp"

using namespace infoest;

TEST_CASE("moment accumulator merging is exact") {
  CounterRng rng({50, 0});
  std::vector<double> values(10001);
  for (auto& v : values) v = std::exp(rng.normal());  // skewed sample

  MomentAccumulator serial;
  for (double v : values) serial.add(v);

  MomentAccumulator a, b, c;
  for (std::size_t i = 0; i < 3000; ++i) a.add(values[i]);
  for (std::size_t i = 3000; i < 7777; ++i) b.add(values[i]);
  for (std::size_t i = 7777; i < values.size(); ++i) c.add(values[i]);
  a.merge(b);
  a.merge(c);

  const EstimatorStats s1 = serial.stats(), s2 = a.stats();
  CHECK(s2.n == s1.n);
  CHECK(s2.mean == doctest::Approx(s1.mean).epsilon(1e-13));
  CHECK(s2.variance == doctest::Approx(s1.variance).epsilon(1e-12));
  CHECK(s2.fourth_central == doctest::Approx(s1.fourth_central).epsilon(1e-11));
}

TEST_CASE("estimator stats formulas") {
  MomentAccumulator acc;
  CounterRng rng({51, 0});
  const int n = 100000;
  for (int i = 0; i < n; ++i) acc.add(rng.normal());
  const EstimatorStats s = acc.stats();
  CHECK(s.std_error_mean == doctest::Approx(std::sqrt(s.variance / n)));
  CHECK(s.std_error_variance ==
        doctest::Approx(std::sqrt((s.fourth_central - s.variance * s.variance) / n)));
  // Gaussian: m4 ~ 3 var^2, so se_var ~ var * sqrt(2/n).
  CHECK(s.std_error_variance ==
        doctest::Approx(s.variance * std::sqrt(2.0 / n)).epsilon(0.05));
}

TEST_CASE("run_experiment guards and determinism") {
  auto f = [](std::uint64_t i) {
    CounterRng rng({52, i});
    return rng.normal();
  };
  CHECK_THROWS_AS(run_experiment(f, 50), std::invalid_argument);
  const EstimatorStats a = run_experiment(f, 100);
  const EstimatorStats b = run_experiment(f, 100);
  CHECK(a.mean == b.mean);
  CHECK(a.variance == b.variance);
}

TEST_CASE("aggregation is order independent across worker counts") {
  auto f = [](std::uint64_t i) {
    CounterRng rng({53, i});
    return std::exp(rng.normal());
  };
  setenv("INFOEST_THREADS", "1", 1);
  const EstimatorStats serial = run_experiment(f, 20000);
  setenv("INFOEST_THREADS", "5", 1);
  const EstimatorStats parallel = run_experiment(f, 20000);
  unsetenv("INFOEST_THREADS");
  CHECK(std::abs(serial.mean - parallel.mean) <= 1e-12 * (1.0 + std::abs(serial.mean)));
  CHECK(std::abs(serial.variance - parallel.variance) <=
        1e-12 * (1.0 + serial.variance));
}

TEST_CASE("quantile bins: equal probability, ties collapse, guards") {
  CounterRng rng({54, 0});
  const int n = 100000;
  std::vector<double> x(n), z(n);
  for (int i = 0; i < n; ++i) {
    x[i] = rng.normal();
    z[i] = rng.normal();  // independent: every bin mean ~ 0
  }
  const auto bins = conditional_mean_by_bins(x, z, 10);
  CHECK(bins.size() == 10);
  for (const auto& b : bins) {
    CHECK(b.stats.n > n / 20);
    CHECK(within_sigma(b.stats.mean, 0.0, b.stats.std_error_mean));
  }

  // Two-point x collapses to exactly two bins.
  for (int i = 0; i < n; ++i) x[i] = (i % 2 == 0) ? -1.0 : 1.0;
  const auto two = conditional_mean_by_bins(x, z, 10);
  CHECK(two.size() == 2);
  CHECK(two[0].x_hi == -1.0);
  CHECK(two[1].x_lo == 1.0);

  // Single-value x: one bin would remain, which the guard rejects as fewer
  // than the two requested.
  CHECK_THROWS_AS(conditional_mean_by_bins(x, z, 1), std::invalid_argument);
}

TEST_CASE("single-atom input yields one bin with zero spread") {
  std::vector<double> x(1000, 2.5), z(1000);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = 0.0;
  const auto bins = conditional_mean_by_bins(x, z, 4);
  CHECK(bins.size() == 1);
  CHECK(bins[0].stats.mean == 0.0);
}

TEST_CASE("empirical cdf and its band") {
  std::vector<double> values = {3.0, 1.0, 2.0, 0.0};
  const EmpiricalCdf cdf = make_empirical_cdf(values);
  CHECK(cdf.sorted[0] == 0.0);
  CHECK(cdf.sorted[3] == 3.0);
  CHECK(cdf.cdf_at(-1.0) == 0.0);
  CHECK(cdf.cdf_at(1.5) == 0.5);
  CHECK(cdf.cdf_at(3.0) == 1.0);
  CHECK(cdf.band_halfwidth == doctest::Approx(std::sqrt(std::log(200.0) / 8.0)));
}

TEST_CASE("cdf band coverage meta-test") {
  // Reference CDF from a large closed-form sample; 40 fresh small samples stay
  // inside their own 99% band around the reference in at least 38 cases.
  auto draw = [](std::uint64_t seed, int n) {
    std::vector<double> v(n);
    CounterRng rng({55, seed});
    for (int i = 0; i < n; ++i) {
      const double x = rng.normal(), noise = rng.normal();
      v[i] = closed_form_Z(CouplingKind::IndependentGaussians, x, noise, 1.0);
    }
    return v;
  };
  const EmpiricalCdf reference = make_empirical_cdf(draw(1000, 400000));
  int inside = 0;
  const int reps = 40, n = 2000;
  for (int r = 0; r < reps; ++r) {
    const std::vector<double> sample = draw(static_cast<std::uint64_t>(r), n);
    const EmpiricalCdf small = make_empirical_cdf(sample);
    double sup = 0.0;
    for (double v : sample) {
      sup = std::max(sup, std::abs(small.cdf_at(v) - reference.cdf_at(v)));
    }
    if (sup <= small.band_halfwidth + reference.band_halfwidth) ++inside;
  }
  CHECK(inside >= 38);
}

TEST_CASE("ks statistic separates normal from shifted samples") {
  const int n = 20000;
  std::vector<double> good(n), bad(n);
  CounterRng rng({56, 0});
  for (int i = 0; i < n; ++i) {
    good[i] = rng.normal();
    bad[i] = rng.normal() + 0.1;
  }
  const double crit = 1.628 / std::sqrt(static_cast<double>(n));
  CHECK(ks_statistic_vs_standard_normal(good) < crit);
  CHECK(ks_statistic_vs_standard_normal(bad) > crit);
}

TEST_CASE("martingale increment test passes left sums and flags anticipating ones") {
  const TimeGrid grid = make_uniform_grid(0.0, 1.0, 64);
  const int n = 20000;
  Eigen::MatrixXd left_sums(n, 5), right_sums(n, 5);
  for (int i = 0; i < n; ++i) {
    const SamplePath w = sample_brownian(grid, RngSeed{57, static_cast<std::uint64_t>(i)});
    // Integrand H = W, partial sums at checkpoints 0, 16, 32, 48, 64.
    double left = 0.0, right = 0.0;
    int col = 0;
    for (int k = 0; k < 64; ++k) {
      if (k % 16 == 0) {
        left_sums(i, col) = left;
        right_sums(i, col) = right;
        ++col;
      }
      const double dw = w[k + 1] - w[k];
      left += w[k] * dw;
      right += w[k + 1] * dw;
    }
    left_sums(i, 4) = left;
    right_sums(i, 4) = right;
  }
  for (const auto& check : martingale_increment_test(left_sums)) {
    CHECK(within_sigma(check.plain.mean, 0.0, check.plain.std_error_mean));
    CHECK(within_sigma(check.against_past.mean, 0.0, check.against_past.std_error_mean));
  }
  // The anticipating sums gain the quadratic variation ~ dt * 16 per block.
  int flagged = 0;
  for (const auto& check : martingale_increment_test(right_sums)) {
    if (!within_sigma(check.plain.mean, 0.0, check.plain.std_error_mean)) ++flagged;
  }
  CHECK(flagged == 4);
}

TEST_CASE("causal tracking-error partial sums pass the martingale test") {
  const TimeGrid grid = make_uniform_grid(0.0, 1.0, 256);
  const ScalarPrior prior = ScalarPrior::gaussian(0.0, 1.0);
  const int n = 20000;
  Eigen::MatrixXd sums(n, 5);
  for (int i = 0; i < n; ++i) {
    CounterRng rng({58, static_cast<std::uint64_t>(i)});
    const SamplePath x(grid, Eigen::VectorXd::Constant(257, prior.sample(rng)));
    const SamplePath w = sample_brownian(grid, rng);
    const SamplePath y = simulate_channel(x, w);
    const FilterOutput f = causal_filter_constant_x(prior, y);
    double acc = 0.0;
    int col = 0;
    for (int k = 0; k < 256; ++k) {
      if (k % 64 == 0) sums(i, col++) = acc;
      acc += (x[k] - f.estimate[k]) * (w[k + 1] - w[k]);
    }
    sums(i, 4) = acc;
  }
  for (const auto& check : martingale_increment_test(sums)) {
    CHECK(within_sigma(check.plain.mean, 0.0, check.plain.std_error_mean));
    CHECK(within_sigma(check.against_past.mean, 0.0, check.against_past.std_error_mean));
  }
}

TEST_CASE("scalar coupling variance sweep follows log(1+snr)") {
  for (double snr : {0.5, 1.0, 2.0, 4.0}) {
    ExperimentSpec spec;
    spec.identity = "scalar_z";
    spec.n_paths = 20000;
    spec.master_seed = 59;
    spec.snr = snr;
    spec.snr_steps = 2048;
    const IdentitySummary s = run_identity(spec);
    CHECK(within_sigma(s.left.variance, std::log1p(snr), s.left.std_error_variance));
    CHECK(s.analytic_variance == doctest::Approx(std::log1p(snr)).epsilon(1e-7));
  }
}

TEST_CASE("identity errors carry the offending path index") {
  // Analytic mode rejects a two-point prior inside the per-path evaluation, so
  // the failure surfaces as "path 0: ...".
  ExperimentSpec spec;
  spec.identity = "scalar_z";
  spec.mode = DensityMode::Analytic;
  spec.prior = ScalarPrior::two_point(-1.0, 1.0, 0.5);
  spec.n_paths = 200;
  spec.snr_steps = 16;
  CHECK_THROWS_WITH_AS(run_identity(spec), doctest::Contains("path "),
                       std::runtime_error);

  // A failure inside a worker surfaces instead of terminating the pool.
  setenv("INFOEST_THREADS", "4", 1);
  bool threw = false;
  try {
    collect_samples(
        [](std::uint64_t i) -> double {
          if (i == 137) throw std::runtime_error("boom");
          return 0.0;
        },
        1000);
  } catch (const std::runtime_error& e) {
    threw = std::string(e.what()).find("boom") != std::string::npos;
  }
  unsetenv("INFOEST_THREADS");
  CHECK(threw);
}

TEST_CASE("worker count respects the environment") {
  setenv("INFOEST_THREADS", "3", 1);
  CHECK(worker_count() == 3);
  unsetenv("INFOEST_THREADS");
  CHECK(worker_count() >= 1);
}
