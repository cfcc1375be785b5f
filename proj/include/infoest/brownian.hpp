#pragma once

#include <Eigen/Core>

#include "infoest/grid.hpp"
#include "infoest/rng.hpp"

namespace infoest {

/// Brownian path on the grid: value[0] = 0, increments i.i.d. N(0, step).
SamplePath sample_brownian(const TimeGrid& grid, CounterRng& rng);
SamplePath sample_brownian(const TimeGrid& grid, const RngSeed& seed);

/// Two-parameter Brownian sheet on a (time x snr) grid, stored as independent
/// cell increments: cell (i, j) covers [t_i, t_{i+1}] x [g_j, g_{j+1}] and is
/// N(0, dt * dg). Partial sums over rectangles recover W_{t,g} with
/// Var(W_{t,g}) = t * g; the slice at level g is a Brownian motion in t with
/// variance parameter g.
struct BrownianSheetGrid {
  TimeGrid time_grid;
  TimeGrid snr_grid;
  Eigen::MatrixXd increments;  // time_grid.n_steps rows x snr_grid.n_steps cols

  /// W at grid node (t_i, g_j): sum of all cells below and to the left.
  double value(int i, int j) const {
    if (i == 0 || j == 0) return 0.0;
    return increments.topLeftCorner(i, j).sum();
  }

  /// Time increments of the slice at the top snr level:
  /// dW^(snr_top)_i = W_{t_{i+1}, top} - W_{t_i, top}, one entry per time step.
  Eigen::VectorXd top_level_time_increments() const {
    return increments.rowwise().sum();
  }

  /// snr increments of the sheet restricted to time rows [row_begin, row_end):
  /// as a process in the snr index this is a Brownian motion with variance
  /// parameter (row span * dt) per unit snr.
  Eigen::VectorXd segment_snr_increments(int row_begin, int row_end) const {
    return increments.middleRows(row_begin, row_end - row_begin).colwise().sum().transpose();
  }
};

BrownianSheetGrid sample_sheet(const TimeGrid& time_grid, const TimeGrid& snr_grid,
                               CounterRng& rng);
BrownianSheetGrid sample_sheet(const TimeGrid& time_grid, const TimeGrid& snr_grid,
                               const RngSeed& seed);

}  // namespace infoest
