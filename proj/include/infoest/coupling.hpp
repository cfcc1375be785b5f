#pragma once

#include "infoest/grid.hpp"
#include "infoest/prior.hpp"
#include "infoest/rng.hpp"

namespace infoest {

/// The three joint constructions of (X, Y_gamma over an snr grid), each
/// consistent with the per-level marginal channel Y_g | X ~ N(sqrt(g) X, 1):
///  - BrownianMotion:          Y_g = g X + W_g, W a standard Brownian motion;
///  - AdditiveStandardGaussian: Y_g = sqrt(g) X + N, one shared N(0,1);
///  - IndependentGaussians:    Y_g = sqrt(g) X + N_i on block i of width snr/M,
///    the N_i independent N(0,1).
enum class CouplingKind { BrownianMotion, AdditiveStandardGaussian, IndependentGaussians };

struct CouplingSample {
  CouplingKind kind;
  double x;
  SamplePath y;      // over the snr grid (for IndependentGaussians: block endpoints)
  SamplePath noise;  // W path / constant-N path / per-block step path
  RngSeed seed;
};

/// Brownian-motion coupling on an snr grid starting at 0. x is drawn by the
/// caller so the same input can be pushed through several couplings.
CouplingSample simulate_bm_coupling(double x, const TimeGrid& snr_grid, CounterRng& rng,
                                    RngSeed seed = {});
CouplingSample simulate_bm_coupling(double x, const TimeGrid& snr_grid, const RngSeed& seed);

CouplingSample simulate_additive_gaussian_coupling(double x, const TimeGrid& snr_grid,
                                                   CounterRng& rng, RngSeed seed = {});
CouplingSample simulate_additive_gaussian_coupling(double x, const TimeGrid& snr_grid,
                                                   const RngSeed& seed);

/// Block coupling with M = blocks independent noises on (0, snr]; the grid of
/// the returned sample has one step per block, so y[i] is the block-i
/// right-endpoint observation Y_{i*snr/M}.
CouplingSample simulate_independent_coupling(double x, double snr, int blocks,
                                             CounterRng& rng, RngSeed seed = {});
CouplingSample simulate_independent_coupling(double x, double snr, int blocks,
                                             const RngSeed& seed);

/// E[X | observations up to level gamma] under the coupling. The
/// Brownian-motion coupling conditions on the path, but its conditional
/// density exp(x Y_g - x^2 g / 2) depends on the path only through the
/// endpoint, so the filter uses the sufficient statistic Y_g with
/// (scale, variance) = (g, g); the other couplings use the point observation
/// with (sqrt(g), 1). gamma = 0 returns the prior mean.
double coupling_posterior_mean(const ScalarPrior& prior, const CouplingSample& sample,
                               int grid_index);

/// Same reduction for E[X^2 | ...].
double coupling_posterior_second_moment(const ScalarPrior& prior,
                                        const CouplingSample& sample, int grid_index);

/// Sufficient-statistic form of the observation at grid node k.
GaussianObservation coupling_observation(const CouplingSample& sample, int grid_index);

}  // namespace infoest
