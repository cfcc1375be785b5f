#pragma once

#include <optional>

#include "infoest/channel.hpp"
#include "infoest/grid.hpp"
#include "infoest/prior.hpp"
#include "infoest/process.hpp"

namespace infoest {

/// Causal conditional-mean path: estimate[k] = E[X_{t_k} | Y_0..Y_k]. The
/// estimate at t depends only on observations up to t; estimates at t = 0 are
/// prior means. error_variance carries the Riccati solution when the filter
/// tracks one.
struct FilterOutput {
  SamplePath estimate;
  std::optional<SamplePath> error_variance;
};

struct SmootherOutput {
  SamplePath estimate;  // E[X_t | Y_0^T], constant per segment
};

/// Exact filter for X_t = X constant on dY = X dt + dW: the path likelihood
/// depends on Y only through its endpoint, so X̂_t = E[X | Y_t] with
/// observation (scale, variance) = (t, t).
FilterOutput causal_filter_constant_x(const ScalarPrior& prior, const SamplePath& y);

/// Exact filter for a piecewise-constant i.i.d. signal with `segments` equal
/// segments: within segment i only the segment's own increment is informative.
FilterOutput causal_filter_piecewise(const ScalarPrior& prior, int segments,
                                     const SamplePath& y);

/// Kalman-Bucy filter for an Ornstein-Uhlenbeck signal with Gaussian initial
/// law. Mean and Riccati variance advance with the same explicit left-rule
/// step as every other discrete sum in the library:
///   m_{k+1} = m_k - a m_k dt + P_k (dY_k - m_k dt),
///   P_{k+1} = P_k + (-2 a P_k + b^2 - P_k^2) dt.
FilterOutput kalman_bucy(const ProcessPrior& ou, const SamplePath& y);

/// Bootstrap particle filter: propagate by the process dynamics, weight by the
/// Gaussian increment likelihood, systematic resampling when the effective
/// sample size drops below n_particles / 2. Initial ensemble is stratified
/// through the prior quantile function. Throws on weight collapse.
FilterOutput particle_filter(const ProcessPrior& process, const SamplePath& y,
                             int n_particles, const RngSeed& seed);

/// Noncausal per-segment posterior for a piecewise-constant signal on
/// dY = X dt + dW: segment i's estimate uses that segment's increment of y.
SmootherOutput smoother_piecewise(const ScalarPrior& prior, int segments,
                                  const SamplePath& y);

/// Runs any filter with the (possibly wrong) law q on observations that were
/// generated under some other law.
template <typename Filter>
FilterOutput mismatched_filter(Filter&& filter, const ScalarPrior& q, const SamplePath& y) {
  return filter(q, y);
}

/// Causal filter of phi_t(Y, X) for the feedback channel: the estimate of the
/// signal part comes from the reduced statistic U (exactly the plain-channel
/// filter), and the observable drift part passes through unchanged.
FilterOutput causal_phi_filter(const PhiSpec& phi, const ScalarPrior& prior,
                               const SamplePath& y);

}  // namespace infoest
