#include "infoest/filters.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace infoest {

namespace {

void require_time_grid_from_zero(const SamplePath& y, const char* where) {
  if (y.grid.t0 != 0.0) {
    throw std::invalid_argument(std::string(where) + ": grid must start at 0");
  }
}

}  // namespace

FilterOutput causal_filter_constant_x(const ScalarPrior& prior, const SamplePath& y) {
  require_time_grid_from_zero(y, "causal_filter_constant_x");
  const int n = y.n_steps();
  Eigen::VectorXd est(n + 1);
  est[0] = prior.mean();
  for (int k = 1; k <= n; ++k) {
    const double t = y.grid.point(k);
    est[k] = posterior_mean(prior, {t, t, y[k]});
  }
  return {SamplePath(y.grid, std::move(est)), std::nullopt};
}

FilterOutput causal_filter_piecewise(const ScalarPrior& prior, int segments,
                                     const SamplePath& y) {
  require_time_grid_from_zero(y, "causal_filter_piecewise");
  const int n = y.n_steps();
  if (segments < 1 || n % segments != 0) {
    throw std::invalid_argument("causal_filter_piecewise: grid steps not divisible by segments");
  }
  const int width = n / segments;
  const double dt = y.step();
  Eigen::VectorXd est(n + 1);
  est[0] = prior.mean();
  for (int k = 1; k <= n; ++k) {
    // Estimate the segment that owns [t_k, t_{k+1}); at an exact boundary a
    // fresh segment starts and nothing informative has been seen yet.
    const int seg = std::min((k == n) ? segments - 1 : k / width, segments - 1);
    const int seg_begin = seg * width;
    if (k == seg_begin) {
      est[k] = prior.mean();
    } else {
      const double span = (k - seg_begin) * dt;
      est[k] = posterior_mean(prior, {span, span, y[k] - y[seg_begin]});
    }
  }
  return {SamplePath(y.grid, std::move(est)), std::nullopt};
}

FilterOutput kalman_bucy(const ProcessPrior& ou, const SamplePath& y) {
  if (ou.kind() != ProcessPrior::Kind::OrnsteinUhlenbeck) {
    throw std::invalid_argument("kalman_bucy: process must be Ornstein-Uhlenbeck");
  }
  require_time_grid_from_zero(y, "kalman_bucy");
  const double a = ou.mean_reversion();
  const double b2 = ou.diffusion() * ou.diffusion();
  const double dt = y.step();
  const int n = y.n_steps();
  Eigen::VectorXd mean(n + 1), var(n + 1);
  mean[0] = ou.scalar_prior().mean();
  var[0] = ou.scalar_prior().variance();
  for (int k = 0; k < n; ++k) {
    const double dy = y[k + 1] - y[k];
    mean[k + 1] = mean[k] - a * mean[k] * dt + var[k] * (dy - mean[k] * dt);
    var[k + 1] = var[k] + (-2.0 * a * var[k] + b2 - var[k] * var[k]) * dt;
  }
  return {SamplePath(y.grid, std::move(mean)), SamplePath(y.grid, std::move(var))};
}

namespace {

void systematic_resample(std::vector<double>& particles, const std::vector<double>& weights,
                         CounterRng& rng) {
  const std::size_t n = particles.size();
  std::vector<double> resampled(n);
  const double u0 = rng.uniform01();
  double cum = weights[0];
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (static_cast<double>(i) + u0) / static_cast<double>(n);
    while (u > cum && j + 1 < n) cum += weights[++j];
    resampled[i] = particles[j];
  }
  particles.swap(resampled);
}

}  // namespace

FilterOutput particle_filter(const ProcessPrior& process, const SamplePath& y,
                             int n_particles, const RngSeed& seed) {
  if (n_particles < 2) {
    throw std::invalid_argument("particle_filter: need at least 2 particles");
  }
  require_time_grid_from_zero(y, "particle_filter");
  CounterRng rng(seed);
  const int n = y.n_steps();
  const double dt = y.step();
  const ScalarPrior& marginal = process.scalar_prior();

  // Stratified initialization through the prior quantile function.
  std::vector<double> particles(n_particles);
  {
    const double u0 = rng.uniform01();
    for (int i = 0; i < n_particles; ++i) {
      particles[i] = marginal.quantile((static_cast<double>(i) + u0) / n_particles);
    }
  }
  std::vector<double> log_w(n_particles, 0.0);
  std::vector<double> w(n_particles, 1.0 / n_particles);

  const int seg_width =
      process.kind() == ProcessPrior::Kind::PiecewiseConstantIID ? n / process.segments() : 0;
  if (process.kind() == ProcessPrior::Kind::PiecewiseConstantIID &&
      n % process.segments() != 0) {
    throw std::invalid_argument("particle_filter: grid steps not divisible by segments");
  }
  double ou_decay = 0.0, ou_tsd = 0.0;
  if (process.kind() == ProcessPrior::Kind::OrnsteinUhlenbeck) {
    const double a = process.mean_reversion();
    ou_decay = std::exp(-a * dt);
    ou_tsd = std::sqrt(process.diffusion() * process.diffusion() *
                       (1.0 - ou_decay * ou_decay) / (2.0 * a));
  }

  auto normalize = [&](int step) {
    double max_lw = -std::numeric_limits<double>::infinity();
    for (double lw : log_w) max_lw = std::max(max_lw, lw);
    if (!std::isfinite(max_lw)) {
      throw std::runtime_error("particle_filter: weight collapse at step " +
                               std::to_string(step));
    }
    double total = 0.0;
    for (int i = 0; i < n_particles; ++i) {
      w[i] = std::exp(log_w[i] - max_lw);
      total += w[i];
    }
    if (!(total > 0.0)) {
      throw std::runtime_error("particle_filter: weight collapse at step " +
                               std::to_string(step));
    }
    for (double& wi : w) wi /= total;
  };
  auto weighted_mean = [&]() {
    double m = 0.0;
    for (int i = 0; i < n_particles; ++i) m += w[i] * particles[i];
    return m;
  };

  Eigen::VectorXd est(n + 1);
  est[0] = weighted_mean();
  for (int k = 0; k < n; ++k) {
    // Assimilate the increment driven by the left-endpoint signal value.
    const double dy = y[k + 1] - y[k];
    for (int i = 0; i < n_particles; ++i) {
      log_w[i] += particles[i] * dy - 0.5 * particles[i] * particles[i] * dt;
    }
    normalize(k);
    const double ess = 1.0 / std::inner_product(w.begin(), w.end(), w.begin(), 0.0);
    if (ess < 0.5 * n_particles) {
      systematic_resample(particles, w, rng);
      std::fill(log_w.begin(), log_w.end(), 0.0);
      std::fill(w.begin(), w.end(), 1.0 / n_particles);
    }
    // Transition to t_{k+1}.
    switch (process.kind()) {
      case ProcessPrior::Kind::ConstantX:
        break;
      case ProcessPrior::Kind::PiecewiseConstantIID:
        if ((k + 1) % seg_width == 0 && k + 1 < n) {
          for (double& p : particles) p = marginal.sample(rng);
          std::fill(log_w.begin(), log_w.end(), 0.0);
          std::fill(w.begin(), w.end(), 1.0 / n_particles);
        }
        break;
      case ProcessPrior::Kind::OrnsteinUhlenbeck:
        for (double& p : particles) p = ou_decay * p + ou_tsd * rng.normal();
        break;
    }
    est[k + 1] = weighted_mean();
  }
  return {SamplePath(y.grid, std::move(est)), std::nullopt};
}

SmootherOutput smoother_piecewise(const ScalarPrior& prior, int segments,
                                  const SamplePath& y) {
  require_time_grid_from_zero(y, "smoother_piecewise");
  const int n = y.n_steps();
  if (segments < 1 || n % segments != 0) {
    throw std::invalid_argument("smoother_piecewise: grid steps not divisible by segments");
  }
  const int width = n / segments;
  const double span = width * y.step();
  Eigen::VectorXd est(n + 1);
  for (int seg = 0; seg < segments; ++seg) {
    const double incr = y[(seg + 1) * width] - y[seg * width];
    const double m = posterior_mean(prior, {span, span, incr});
    est.segment(seg * width, width).setConstant(m);
  }
  est[n] = est[n - 1];
  return {SamplePath(y.grid, std::move(est))};
}

FilterOutput causal_phi_filter(const PhiSpec& phi, const ScalarPrior& prior,
                               const SamplePath& y) {
  if (phi.kind == PhiSpec::Kind::Identity) {
    return causal_filter_constant_x(prior, y);
  }
  const SamplePath u = reduced_statistic(phi, y);
  FilterOutput base = causal_filter_constant_x(prior, u);
  base.estimate.values += phi.amplitude * y.values.array().sin().matrix();
  return base;
}

}  // namespace infoest
