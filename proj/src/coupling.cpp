#include "infoest/coupling.hpp"

#include <cmath>
#include <stdexcept>

#include "infoest/brownian.hpp"

namespace infoest {

namespace {

void require_snr_grid(const TimeGrid& grid, const char* where) {
  if (grid.t0 != 0.0) {
    throw std::invalid_argument(std::string(where) + ": snr grid must start at 0");
  }
}

}  // namespace

CouplingSample simulate_bm_coupling(double x, const TimeGrid& snr_grid, CounterRng& rng,
                                    RngSeed seed) {
  require_snr_grid(snr_grid, "simulate_bm_coupling");
  SamplePath w = sample_brownian(snr_grid, rng);
  Eigen::VectorXd y(snr_grid.n_points());
  for (int k = 0; k <= snr_grid.n_steps; ++k) {
    y[k] = snr_grid.point(k) * x + w[k];
  }
  return CouplingSample{CouplingKind::BrownianMotion, x,
                        SamplePath(snr_grid, std::move(y)), std::move(w), seed};
}

CouplingSample simulate_bm_coupling(double x, const TimeGrid& snr_grid,
                                    const RngSeed& seed) {
  CounterRng rng(seed);
  return simulate_bm_coupling(x, snr_grid, rng, seed);
}

CouplingSample simulate_additive_gaussian_coupling(double x, const TimeGrid& snr_grid,
                                                   CounterRng& rng, RngSeed seed) {
  require_snr_grid(snr_grid, "simulate_additive_gaussian_coupling");
  const double noise = rng.normal();
  Eigen::VectorXd y(snr_grid.n_points());
  for (int k = 0; k <= snr_grid.n_steps; ++k) {
    y[k] = std::sqrt(snr_grid.point(k)) * x + noise;
  }
  return CouplingSample{
      CouplingKind::AdditiveStandardGaussian, x, SamplePath(snr_grid, std::move(y)),
      SamplePath(snr_grid, Eigen::VectorXd::Constant(snr_grid.n_points(), noise)), seed};
}

CouplingSample simulate_additive_gaussian_coupling(double x, const TimeGrid& snr_grid,
                                                   const RngSeed& seed) {
  CounterRng rng(seed);
  return simulate_additive_gaussian_coupling(x, snr_grid, rng, seed);
}

CouplingSample simulate_independent_coupling(double x, double snr, int blocks,
                                             CounterRng& rng, RngSeed seed) {
  if (blocks < 1) {
    throw std::invalid_argument("simulate_independent_coupling: blocks must be >= 1");
  }
  if (!(snr > 0.0)) {
    throw std::invalid_argument("simulate_independent_coupling: snr must be > 0");
  }
  const TimeGrid grid = make_uniform_grid(0.0, snr, blocks);
  Eigen::VectorXd noise(blocks + 1);
  Eigen::VectorXd y(blocks + 1);
  // Blocks are ((i-1) snr/M, i snr/M]; node k > 0 is the right endpoint of
  // block k. The degenerate node 0 reuses the first block's noise.
  for (int i = 1; i <= blocks; ++i) noise[i] = rng.normal();
  noise[0] = noise[1];
  for (int k = 0; k <= blocks; ++k) {
    y[k] = std::sqrt(grid.point(k)) * x + noise[k];
  }
  return CouplingSample{CouplingKind::IndependentGaussians, x,
                        SamplePath(grid, std::move(y)),
                        SamplePath(grid, std::move(noise)), seed};
}

CouplingSample simulate_independent_coupling(double x, double snr, int blocks,
                                             const RngSeed& seed) {
  CounterRng rng(seed);
  return simulate_independent_coupling(x, snr, blocks, rng, seed);
}

GaussianObservation coupling_observation(const CouplingSample& sample, int grid_index) {
  const double gamma = sample.y.grid.point(grid_index);
  if (sample.kind == CouplingKind::BrownianMotion) {
    return {gamma, gamma, sample.y[grid_index]};
  }
  return {std::sqrt(gamma), 1.0, sample.y[grid_index]};
}

double coupling_posterior_mean(const ScalarPrior& prior, const CouplingSample& sample,
                               int grid_index) {
  const double gamma = sample.y.grid.point(grid_index);
  if (gamma == 0.0) return prior.mean();
  return posterior_mean(prior, coupling_observation(sample, grid_index));
}

double coupling_posterior_second_moment(const ScalarPrior& prior,
                                        const CouplingSample& sample, int grid_index) {
  const double gamma = sample.y.grid.point(grid_index);
  if (gamma == 0.0) return prior.second_moment();
  return posterior_second_moment(prior, coupling_observation(sample, grid_index));
}

}  // namespace infoest
