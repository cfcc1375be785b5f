#pragma once

#include <cstdint>
#include <string>

#include "infoest/brownian.hpp"
#include "infoest/channel.hpp"
#include "infoest/coupling.hpp"
#include "infoest/densities.hpp"
#include "infoest/filters.hpp"
#include "infoest/integrate.hpp"
#include "infoest/prior.hpp"

namespace infoest {

/// One pathwise evaluation of a tracking-error identity. left is the density
/// side (log Radon-Nikodym derivative minus half the squared-error integral),
/// right the stochastic-integral side, gap their difference. In Algebraic mode
/// both sides are built from the same discrete sums and the gap is roundoff
/// (|gap| <= 1e-9 (1 + |left|)); in Analytic mode the density side is a closed
/// form and the gap records the discretization error.
struct IdentityReport {
  std::string identity;
  std::uint64_t stream = 0;
  double left = 0.0;
  double right = 0.0;
  double gap = 0.0;
  DensityMode mode = DensityMode::Algebraic;
};

struct IdentityOptions {
  DensityMode mode = DensityMode::Algebraic;
  ItoRule rule = ItoRule::LeftPoint;  // RightPointAnticipating only as negative control
};

/// Scalar matched tracking error under the Brownian-motion coupling:
///   left  = log dP_{Y|X}/dP_Y - (1/2) int (X - X̂_g)^2 dg,
///   right = int (X - X̂_g) dW_g.
/// Analytic mode (standard normal prior only) swaps the density for the closed
/// form evaluated at the endpoint sufficient statistic.
IdentityReport scalar_Z(const CouplingSample& sample, const ScalarPrior& prior,
                        const IdentityOptions& opts = {});

/// Scalar mismatched tracking error:
///   left  = log dP_Y/dQ_Y - (1/2) int [(X - X̂^Q)^2 - (X - X̂^P)^2] dg,
///   right = int (X̂^P - X̂^Q) dW_g.
IdentityReport scalar_Z_mismatch(const CouplingSample& sample, const ScalarPrior& p,
                                 const ScalarPrior& q, const IdentityOptions& opts = {});

/// Continuous-time matched tracking error on dY = X dt + dW with the supplied
/// causal estimate path.
IdentityReport duncan_D(const SamplePath& x, const SamplePath& y,
                        const FilterOutput& filter, const SamplePath& w,
                        const IdentityOptions& opts = {});

/// Continuous-time mismatched tracking error with causal estimates under P and Q.
IdentityReport mismatch_M(const SamplePath& x, const SamplePath& y,
                          const FilterOutput& filter_p, const FilterOutput& filter_q,
                          const SamplePath& w, const IdentityOptions& opts = {});

/// Feedback-channel tracking error for dY = phi_t(Y, X) dt + dW.
IdentityReport feedback_D_phi(const PhiSpec& phi, const ScalarPrior& prior,
                              const SamplePath& x, const SamplePath& y,
                              const SamplePath& w, const IdentityOptions& opts = {});

/// Mismatched feedback-channel tracking error.
IdentityReport feedback_M_phi(const PhiSpec& phi, const ScalarPrior& p,
                              const ScalarPrior& q, const SamplePath& x,
                              const SamplePath& y, const SamplePath& w,
                              const IdentityOptions& opts = {});

/// Tracking error of the snr-indexed channel over a Brownian sheet for a
/// piecewise-constant signal (segments = 1 covers the constant case):
///   left  = information density at the top snr level
///           - (1/2) int_0^snr int_0^T (X_t - smoother_g)^2 dt dg,
///   right = sum over segments of int (X_i - X̂_i(g)) dW^[i]_g.
IdentityReport sheet_N(const ScalarPrior& prior, int segments,
                       const Eigen::VectorXd& segment_x, const BrownianSheetGrid& sheet,
                       const IdentityOptions& opts = {});

/// Difference of causal and anticausal squared errors at snr = 1:
///   left  = int (X - X̂)^2 dt - int (X~ - X̂~)^2 dt,
///   right = 2 [ int X̂ dW - int X̂~ dB ]  (+ the difference of the forward and
///           reversed density evaluations in Algebraic mode, which is what the
///           continuum identity cancels a.s.).
/// Only constant / piecewise-constant signals are accepted; the discrete
/// reversal identity  sum X~ dB = sum X dW  is asserted at runtime.
IdentityReport causal_anticausal_J(const ScalarPrior& prior, int segments,
                                   const SamplePath& x, const SamplePath& y,
                                   const SamplePath& w, const IdentityOptions& opts = {});

/// Filtering error at snr = 1 minus smoothing error averaged over snr in [0,1],
/// both read off the same Brownian sheet; right combines the stochastic
/// integrals of the time route and the snr route.
IdentityReport causal_vs_noncausal(const ScalarPrior& prior, int segments,
                                   const Eigen::VectorXd& segment_x,
                                   const BrownianSheetGrid& sheet,
                                   const IdentityOptions& opts = {});

/// Pointwise differential tracking error of the additive-standard-Gaussian
/// coupling at level gamma > 0, from the exact posterior moments:
///   (1/2) { E[X^2|Y] - X E[X|Y] - (X - E[X|Y])^2 + (Y/sqrt(g)) (X - E[X|Y]) }.
double ztilde_gamma(const ScalarPrior& prior, double x, double noise, double gamma);

/// Z = int_0^snr ztilde_gamma dg by composite Simpson after u = sqrt(g)
/// substitution (the gamma-integrand has an integrable 1/sqrt(g) singularity
/// at 0 that the substitution removes). intervals must be even.
double additive_coupling_Z(const ScalarPrior& prior, double x, double noise, double snr,
                           int intervals = 256);

/// Closed-form tracking errors for a standard normal input:
///  - AdditiveStandardGaussian: (1/2)[log(1+snr) - N^2 log(1+snr)
///                                    + 2 X N atan(sqrt(snr))],
///  - IndependentGaussians (M -> infinity limit):
///                              (-N^2 snr + 2 X N sqrt(snr) + snr) / (2 (1+snr)).
double closed_form_Z(CouplingKind kind, double x, double noise, double snr);

/// Block tracking error of the independent-Gaussians coupling at finite M:
/// I1 (closed form at the top block) minus half the block Riemann sum of the
/// squared error. Standard normal prior.
double independent_coupling_Z_blocks(const CouplingSample& sample);

/// Cross-coupling identity: the two channels Y_g = sqrt(g) X + W_1 and
/// Y~_g = g X + W_g share one Brownian path, so their information densities at
/// snr = 1 agree and
///   Z1 = int (X - X̂_Y~) dW + (1/2) int (X - X̂_Y~)^2 dg
///        - (1/2) int (X - X̂_Y)^2 dg.
/// Standard normal prior; inherently Analytic (closed-form density vs sums).
IdentityReport cross_coupling_check(double x, const SamplePath& w,
                                    const ScalarPrior& prior,
                                    const IdentityOptions& opts = {});

/// max |gap| / (1 + |left|) admissible in Algebraic mode.
inline constexpr double kAlgebraicGapTolerance = 1e-9;

}  // namespace infoest
