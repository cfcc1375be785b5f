#include "infoest/brownian.hpp"

#include <cmath>

namespace infoest {

SamplePath sample_brownian(const TimeGrid& grid, CounterRng& rng) {
  const int n = grid.n_steps;
  const double sd = std::sqrt(grid.step());
  Eigen::VectorXd v(n + 1);
  v[0] = 0.0;
  for (int k = 0; k < n; ++k) {
    v[k + 1] = v[k] + sd * rng.normal();
  }
  return SamplePath(grid, std::move(v));
}

SamplePath sample_brownian(const TimeGrid& grid, const RngSeed& seed) {
  CounterRng rng(seed);
  return sample_brownian(grid, rng);
}

BrownianSheetGrid sample_sheet(const TimeGrid& time_grid, const TimeGrid& snr_grid,
                               CounterRng& rng) {
  const int nt = time_grid.n_steps;
  const int ng = snr_grid.n_steps;
  const double sd = std::sqrt(time_grid.step() * snr_grid.step());
  Eigen::MatrixXd cells(nt, ng);
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < ng; ++j) {
      cells(i, j) = sd * rng.normal();
    }
  }
  return BrownianSheetGrid{time_grid, snr_grid, std::move(cells)};
}

BrownianSheetGrid sample_sheet(const TimeGrid& time_grid, const TimeGrid& snr_grid,
                               const RngSeed& seed) {
  CounterRng rng(seed);
  return sample_sheet(time_grid, snr_grid, rng);
}

}  // namespace infoest
