#pragma once

#include <cmath>

#include "infoest/grid.hpp"

namespace infoest {

/// Channel drift functional phi_t(Y_0^t, X_t). Two built-in instances keep the
/// causal estimate of phi exactly computable:
///  - Identity:       phi = X_t (no feedback),
///  - ObservableDrift: phi = X_t + amplitude * sin(Y_t); the sin term is
///    Y-measurable, so it passes through every conditional expectation.
struct PhiSpec {
  enum class Kind { Identity, ObservableDrift };
  Kind kind = Kind::Identity;
  double amplitude = 0.0;

  static PhiSpec identity() { return {Kind::Identity, 0.0}; }
  static PhiSpec observable_drift(double amplitude) {
    return {Kind::ObservableDrift, amplitude};
  }

  double drift(double x, double y) const {
    return kind == Kind::Identity ? x : x + amplitude * std::sin(y);
  }
};

/// Observation path of dY = X dt + dW on the shared grid, built with the left
/// rule: Y[k+1] = Y[k] + X[k] dt + dW[k].
SamplePath simulate_channel(const SamplePath& x, const SamplePath& w);

/// Observation path of dY = phi_t(Y, X) dt + dW, same left-rule recursion. The
/// Identity instance performs no extra arithmetic, so it reproduces
/// simulate_channel bit for bit.
SamplePath simulate_feedback_channel(const PhiSpec& phi, const SamplePath& x,
                                     const SamplePath& w);

/// phi evaluated along the realized (x, y) paths.
SamplePath phi_path(const PhiSpec& phi, const SamplePath& x, const SamplePath& y);

/// Y-measurable statistic U_t = Y_t - integral of the observable drift part;
/// for both built-in instances U given X is exactly the plain channel
/// statistic X * t + W_t, which is what makes the filters below exact.
SamplePath reduced_statistic(const PhiSpec& phi, const SamplePath& y);

}  // namespace infoest
