#pragma once

#include "infoest/grid.hpp"

namespace infoest {

/// How a log-density (or an identity side) was produced. Algebraic values are
/// exact discrete-sum evaluations whose identities close to roundoff;
/// Analytic values are closed forms, and the gap against the discrete sums is
/// the discretization error under study.
enum class DensityMode { Algebraic, Analytic };

inline const char* to_string(DensityMode m) {
  return m == DensityMode::Algebraic ? "algebraic" : "analytic";
}

/// A log Radon-Nikodym derivative evaluation, in nats.
struct LogDensityValue {
  double value;
  DensityMode mode;
};

/// Girsanov exponent of the conditional law against the Wiener reference:
///   sum_k x[k] dY[k] - (1/2) sum_k x[k]^2 dt.
/// The reference measure never appears alone; only differences of these
/// exponents are exposed.
LogDensityValue log_rn_conditional(const SamplePath& x, const SamplePath& y);

/// Same exponent with the causal estimate path: the marginal law of Y.
LogDensityValue log_rn_marginal(const SamplePath& xhat, const SamplePath& y);

/// Information density log dP_{Y|X}/dP_Y = conditional - marginal, evaluated
/// on one realized path with the supplied causal estimate path.
LogDensityValue information_density(const SamplePath& x, const SamplePath& y,
                                    const SamplePath& xhat);

/// log dP_Y/dQ_Y from the two causal estimate paths:
///   sum (pi_p - pi_q) dY - (1/2) sum (pi_p^2 - pi_q^2) dt.
LogDensityValue mismatch_log_rn(const SamplePath& pi_p, const SamplePath& pi_q,
                                const SamplePath& y);

/// Closed-form scalar information density for X ~ N(0,1) observed as
/// Y | X ~ N(sqrt(snr) X, 1):
///   (1/2) log(1+snr) + (1/2) (Y^2/(1+snr) - (Y - sqrt(snr) X)^2).
LogDensityValue closed_form_info_density_gaussian_scalar(double x, double y, double snr);

/// E[I1 | X] for the same closed form: (1/2) log(1+snr) +
/// (snr / (2(1+snr))) (X^2 - 1).
double closed_form_info_density_conditional_mean(double x, double snr);

}  // namespace infoest
