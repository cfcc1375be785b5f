#pragma once

#include "infoest/grid.hpp"
#include "infoest/prior.hpp"
#include "infoest/rng.hpp"

namespace infoest {

/// Input law of the continuous-time signal X_t. Three variants:
///  - ConstantX: X_t = X for a scalar draw X,
///  - PiecewiseConstantIID: M equal segments, each an independent scalar draw,
///  - OrnsteinUhlenbeck: dX = -a X dt + b dW', Gaussian initial law (so the
///    Kalman-Bucy filter is exact); sampled with exact transitions.
class ProcessPrior {
 public:
  enum class Kind { ConstantX, PiecewiseConstantIID, OrnsteinUhlenbeck };

  static ProcessPrior constant(ScalarPrior prior);
  static ProcessPrior piecewise_iid(ScalarPrior prior, int segments);
  static ProcessPrior ornstein_uhlenbeck(double mean_reversion, double diffusion,
                                         ScalarPrior initial);
  static ProcessPrior stationary_ou(double mean_reversion, double diffusion);

  Kind kind() const { return kind_; }
  const ScalarPrior& scalar_prior() const { return prior_; }
  int segments() const { return segments_; }
  double mean_reversion() const { return a_; }
  double diffusion() const { return b_; }

  /// Draws a path on the grid. Piecewise variants fill value[k] with the
  /// segment owning step k (left-rule: the value driving [t_k, t_{k+1})).
  SamplePath sample_path(const TimeGrid& grid, CounterRng& rng) const;

  /// Analytic integral of E[X_t^2] over [0, T] (finite-power check).
  double mean_square_power(double T) const;

 private:
  ProcessPrior() : prior_(ScalarPrior::gaussian(0.0, 1.0)) {}
  Kind kind_ = Kind::ConstantX;
  ScalarPrior prior_;
  int segments_ = 1;
  double a_ = 0.0, b_ = 0.0;
};

/// Segment draws of a piecewise-constant process expanded onto a grid whose
/// step count is divisible by the segment count.
SamplePath expand_segments(const Eigen::VectorXd& segment_values, const TimeGrid& grid);

}  // namespace infoest
