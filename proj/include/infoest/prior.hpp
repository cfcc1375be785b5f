#pragma once

#include <Eigen/Core>

#include <functional>
#include <vector>

#include "infoest/rng.hpp"

namespace infoest {

/// One Gaussian observation of a scalar signal: Y = scale * X + N(0, noise_variance).
/// Every channel in the library reduces to this form through a sufficient
/// statistic (endpoint of a Brownian-coupling path, segment increment, ...).
struct GaussianObservation {
  double scale;
  double noise_variance;
  double value;
};

struct MixtureComponent {
  double weight;
  double mean;
  double variance;
};

/// Input law of the clean scalar signal X. Three conjugate-tractable variants:
/// Gaussian, two-point, and finite Gaussian mixture. All have finite fourth
/// moments (needed by the independent-Gaussians coupling regularity).
class ScalarPrior {
 public:
  enum class Kind { Gaussian, TwoPoint, Mixture };

  static ScalarPrior gaussian(double mean, double variance);
  /// p1 is P(X = x1); the complement sits on x0. x0 == x1 is the point-mass idiom.
  static ScalarPrior two_point(double x0, double x1, double p1);
  static ScalarPrior mixture(std::vector<MixtureComponent> components);
  static ScalarPrior point_mass(double x) { return two_point(x, x, 0.5); }

  Kind kind() const { return kind_; }
  bool is_point_mass() const;

  double mean() const;
  double variance() const;
  double second_moment() const;
  double fourth_moment() const;

  double sample(CounterRng& rng) const;
  /// Inverse CDF; exact for Gaussian/TwoPoint, bisection for mixtures.
  double quantile(double u) const;

  // Variant access (throws on kind mismatch).
  const std::vector<MixtureComponent>& components() const;
  double two_point_x0() const;
  double two_point_x1() const;
  double two_point_p1() const;

 private:
  ScalarPrior() = default;
  Kind kind_ = Kind::Gaussian;
  std::vector<MixtureComponent> components_;  // Gaussian/Mixture
  double x0_ = 0.0, x1_ = 0.0, p1_ = 0.5;     // TwoPoint
};

/// Exact E[X | Y = obs.value] for Y = scale*X + N(0, noise_variance).
/// scale = 0 returns the prior mean (the observation carries no signal).
double posterior_mean(const ScalarPrior& prior, const GaussianObservation& obs);

/// Exact E[X^2 | Y = obs.value].
double posterior_second_moment(const ScalarPrior& prior, const GaussianObservation& obs);

/// Minimum mean squared error E[(X - E[X|Y])^2] for Y = sqrt(snr) X + N(0,1),
/// by Gauss-Hermite quadrature with adaptive order doubling (stops when a
/// doubling moves the value by < 1e-10, capped at 512 nodes). This is the
/// independent target for the Monte Carlo runs.
double mmse_scalar(const ScalarPrior& prior, double snr);

/// Mismatched error E_P[(X - E_Q[X|Y])^2] at the same channel, same quadrature.
double mse_mismatched(const ScalarPrior& p, const ScalarPrior& q, double snr);

/// E_P[f(X, Y)] for Y = sqrt(snr) X + N(0,1) via tensor Gauss-Hermite with the
/// same adaptive doubling. Building block for the quadrature targets above.
double expect_under_channel(const ScalarPrior& prior, double snr,
                            const std::function<double(double, double)>& f);

/// Gauss-Hermite rule for integrals against the standard normal density:
/// E[g(N)] ~= sum_i weights[i] * g(nodes[i]). Nodes/weights from the
/// Golub-Welsch symmetric tridiagonal eigenproblem.
struct GaussHermiteRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};
const GaussHermiteRule& gauss_hermite(int order);

}  // namespace infoest
