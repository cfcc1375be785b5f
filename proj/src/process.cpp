#include "infoest/process.hpp"

#include <cmath>
#include <stdexcept>

namespace infoest {

ProcessPrior ProcessPrior::constant(ScalarPrior prior) {
  ProcessPrior p;
  p.kind_ = Kind::ConstantX;
  p.prior_ = std::move(prior);
  p.segments_ = 1;
  return p;
}

ProcessPrior ProcessPrior::piecewise_iid(ScalarPrior prior, int segments) {
  if (segments < 1) {
    throw std::invalid_argument("ProcessPrior::piecewise_iid: segments must be >= 1");
  }
  ProcessPrior p;
  p.kind_ = Kind::PiecewiseConstantIID;
  p.prior_ = std::move(prior);
  p.segments_ = segments;
  return p;
}

ProcessPrior ProcessPrior::ornstein_uhlenbeck(double mean_reversion, double diffusion,
                                              ScalarPrior initial) {
  if (!(mean_reversion > 0.0)) {
    throw std::invalid_argument("ProcessPrior::ornstein_uhlenbeck: mean_reversion must be > 0");
  }
  if (diffusion < 0.0) {
    throw std::invalid_argument("ProcessPrior::ornstein_uhlenbeck: diffusion must be >= 0");
  }
  if (initial.kind() != ScalarPrior::Kind::Gaussian) {
    throw std::invalid_argument(
        "ProcessPrior::ornstein_uhlenbeck: initial law must be Gaussian");
  }
  ProcessPrior p;
  p.kind_ = Kind::OrnsteinUhlenbeck;
  p.prior_ = std::move(initial);
  p.a_ = mean_reversion;
  p.b_ = diffusion;
  return p;
}

ProcessPrior ProcessPrior::stationary_ou(double mean_reversion, double diffusion) {
  const double var = diffusion * diffusion / (2.0 * mean_reversion);
  return ornstein_uhlenbeck(mean_reversion, diffusion, ScalarPrior::gaussian(0.0, var));
}

SamplePath expand_segments(const Eigen::VectorXd& segment_values, const TimeGrid& grid) {
  const int m = static_cast<int>(segment_values.size());
  if (grid.n_steps % m != 0) {
    throw std::invalid_argument("expand_segments: grid steps not divisible by segment count");
  }
  const int width = grid.n_steps / m;
  Eigen::VectorXd v(grid.n_points());
  for (int k = 0; k < grid.n_steps; ++k) {
    v[k] = segment_values[k / width];
  }
  v[grid.n_steps] = segment_values[m - 1];
  return SamplePath(grid, std::move(v));
}

SamplePath ProcessPrior::sample_path(const TimeGrid& grid, CounterRng& rng) const {
  switch (kind_) {
    case Kind::ConstantX: {
      const double x = prior_.sample(rng);
      return SamplePath(grid, Eigen::VectorXd::Constant(grid.n_points(), x));
    }
    case Kind::PiecewiseConstantIID: {
      Eigen::VectorXd seg(segments_);
      for (int i = 0; i < segments_; ++i) seg[i] = prior_.sample(rng);
      return expand_segments(seg, grid);
    }
    case Kind::OrnsteinUhlenbeck: {
      // Exact transitions: X_{k+1} = e^{-a dt} X_k + N(0, b^2 (1 - e^{-2 a dt}) / 2a).
      const double dt = grid.step();
      const double decay = std::exp(-a_ * dt);
      const double tvar = b_ * b_ * (1.0 - decay * decay) / (2.0 * a_);
      const double tsd = std::sqrt(tvar);
      Eigen::VectorXd v(grid.n_points());
      v[0] = prior_.sample(rng);
      for (int k = 0; k < grid.n_steps; ++k) {
        v[k + 1] = decay * v[k] + tsd * rng.normal();
      }
      return SamplePath(grid, std::move(v));
    }
  }
  throw std::logic_error("unreachable");
}

double ProcessPrior::mean_square_power(double T) const {
  switch (kind_) {
    case Kind::ConstantX:
    case Kind::PiecewiseConstantIID:
      return prior_.second_moment() * T;
    case Kind::OrnsteinUhlenbeck: {
      // E[X_t^2] = m0^2 e^{-2at} ... with Gaussian(m, v) start:
      // E[X_t^2] = e^{-2at}(v + m^2) + (1 - e^{-2at}) b^2/(2a); integrate.
      const double m2_0 = prior_.second_moment();
      const double s2 = b_ * b_ / (2.0 * a_);
      const double decay_int = (1.0 - std::exp(-2.0 * a_ * T)) / (2.0 * a_);
      return (m2_0 - s2) * decay_int + s2 * T;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace infoest
