#pragma once

#include "infoest/grid.hpp"

namespace infoest {

/// Evaluation point of the integrand in discrete stochastic sums. LeftPoint is
/// the non-anticipating Ito convention used everywhere; RightPointAnticipating
/// exists only as a negative control (it shifts martingale sums by the
/// quadratic covariation and must be caught by the test suites).
enum class ItoRule { LeftPoint, RightPointAnticipating };

/// Discrete Ito integral  sum_k H[k] (Y[k+1] - Y[k])  over the shared grid.
inline double ito_integral(const SamplePath& integrand, const SamplePath& integrator,
                           ItoRule rule = ItoRule::LeftPoint) {
  require_same_grid(integrand, integrator, "ito_integral");
  const int n = integrand.n_steps();
  const auto dy = (integrator.values.tail(n) - integrator.values.head(n)).array();
  if (rule == ItoRule::LeftPoint) {
    return (integrand.values.head(n).array() * dy).sum();
  }
  return (integrand.values.tail(n).array() * dy).sum();
}

/// Left-endpoint Riemann sum  sum_k path[k] * step. The left rule matches the
/// Ito convention so the discrete identities close exactly.
inline double lebesgue_integral(const SamplePath& path) {
  const int n = path.n_steps();
  return path.values.head(n).sum() * path.step();
}

}  // namespace infoest
