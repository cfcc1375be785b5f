#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace infoest {

/// Uniform grid on [t0, t1]. The axis may be time or snr; point k is always
/// computed as t0 + k*step so the grid carries no cumulative drift.
struct TimeGrid {
  double t0 = 0.0;
  double t1 = 1.0;
  int n_steps = 1;

  double step() const { return (t1 - t0) / static_cast<double>(n_steps); }
  double point(int k) const { return t0 + static_cast<double>(k) * step(); }
  int n_points() const { return n_steps + 1; }
  double length() const { return t1 - t0; }

  bool operator==(const TimeGrid&) const = default;
};

inline TimeGrid make_uniform_grid(double t0, double t1, int n_steps) {
  if (!(t1 > t0)) {
    throw std::invalid_argument("make_uniform_grid: need t1 > t0, got [" +
                                std::to_string(t0) + ", " + std::to_string(t1) + "]");
  }
  if (n_steps < 1) {
    throw std::invalid_argument("make_uniform_grid: need n_steps >= 1");
  }
  return TimeGrid{t0, t1, n_steps};
}

/// A real-valued path sampled on a uniform grid: values has grid.n_steps + 1
/// entries, values[k] at grid.point(k).
struct SamplePath {
  TimeGrid grid;
  Eigen::VectorXd values;

  SamplePath() : values(2) { values.setZero(); }
  SamplePath(TimeGrid g, Eigen::VectorXd v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.n_points()) {
      throw std::invalid_argument("SamplePath: values length " +
                                  std::to_string(values.size()) +
                                  " does not match grid with " +
                                  std::to_string(grid.n_points()) + " points");
    }
  }

  double step() const { return grid.step(); }
  int n_steps() const { return grid.n_steps; }
  double operator[](int k) const { return values[k]; }
  double& operator[](int k) { return values[k]; }
  double back() const { return values[values.size() - 1]; }
};

inline void require_same_grid(const SamplePath& a, const SamplePath& b,
                              const char* where) {
  if (!(a.grid == b.grid)) {
    throw std::invalid_argument(std::string(where) + ": paths live on different grids");
  }
}

/// Path truncated to [t0, point(k_last)]; used by causality checks.
inline SamplePath truncate(const SamplePath& p, int k_last) {
  if (k_last < 1 || k_last > p.n_steps()) {
    throw std::invalid_argument("truncate: index out of range");
  }
  TimeGrid g{p.grid.t0, p.grid.point(k_last), k_last};
  return SamplePath(g, p.values.head(k_last + 1));
}

}  // namespace infoest
