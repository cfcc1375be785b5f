#include "infoest/channel.hpp"

#include <cmath>

namespace infoest {

SamplePath simulate_channel(const SamplePath& x, const SamplePath& w) {
  return simulate_feedback_channel(PhiSpec::identity(), x, w);
}

SamplePath simulate_feedback_channel(const PhiSpec& phi, const SamplePath& x,
                                     const SamplePath& w) {
  require_same_grid(x, w, "simulate_feedback_channel");
  const int n = x.n_steps();
  const double dt = x.step();
  Eigen::VectorXd y(n + 1);
  y[0] = 0.0;
  if (phi.kind == PhiSpec::Kind::Identity) {
    for (int k = 0; k < n; ++k) {
      y[k + 1] = y[k] + x[k] * dt + (w[k + 1] - w[k]);
    }
  } else {
    for (int k = 0; k < n; ++k) {
      y[k + 1] = y[k] + phi.drift(x[k], y[k]) * dt + (w[k + 1] - w[k]);
    }
  }
  return SamplePath(x.grid, std::move(y));
}

SamplePath phi_path(const PhiSpec& phi, const SamplePath& x, const SamplePath& y) {
  require_same_grid(x, y, "phi_path");
  if (phi.kind == PhiSpec::Kind::Identity) return x;
  Eigen::VectorXd v = x.values + phi.amplitude * y.values.array().sin().matrix();
  return SamplePath(x.grid, std::move(v));
}

SamplePath reduced_statistic(const PhiSpec& phi, const SamplePath& y) {
  if (phi.kind == PhiSpec::Kind::Identity) return y;
  const int n = y.n_steps();
  const double dt = y.step();
  Eigen::VectorXd u(n + 1);
  u[0] = y[0];
  double drift_sum = 0.0;
  for (int k = 0; k < n; ++k) {
    drift_sum += phi.amplitude * std::sin(y[k]) * dt;
    u[k + 1] = y[k + 1] - drift_sum;
  }
  return SamplePath(y.grid, std::move(u));
}

}  // namespace infoest
