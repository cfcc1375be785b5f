#include "infoest/densities.hpp"

#include <cmath>
#include <stdexcept>

#include "infoest/integrate.hpp"

namespace infoest {

namespace {

// sum_k h[k] dY[k] - (1/2) sum_k h[k]^2 dt, the shared Girsanov kernel.
double girsanov_exponent(const SamplePath& h, const SamplePath& y) {
  require_same_grid(h, y, "girsanov exponent");
  const int n = h.n_steps();
  const auto hk = h.values.head(n).array();
  const auto dy = (y.values.tail(n) - y.values.head(n)).array();
  return (hk * dy).sum() - 0.5 * hk.square().sum() * h.step();
}

}  // namespace

LogDensityValue log_rn_conditional(const SamplePath& x, const SamplePath& y) {
  return {girsanov_exponent(x, y), DensityMode::Algebraic};
}

LogDensityValue log_rn_marginal(const SamplePath& xhat, const SamplePath& y) {
  return {girsanov_exponent(xhat, y), DensityMode::Algebraic};
}

LogDensityValue information_density(const SamplePath& x, const SamplePath& y,
                                    const SamplePath& xhat) {
  require_same_grid(x, y, "information_density");
  require_same_grid(xhat, y, "information_density");
  const int n = x.n_steps();
  const auto xk = x.values.head(n).array();
  const auto mk = xhat.values.head(n).array();
  const auto dy = (y.values.tail(n) - y.values.head(n)).array();
  const double value = ((xk - mk) * dy).sum() -
                       0.5 * (xk.square() - mk.square()).sum() * x.step();
  return {value, DensityMode::Algebraic};
}

LogDensityValue mismatch_log_rn(const SamplePath& pi_p, const SamplePath& pi_q,
                                const SamplePath& y) {
  return {information_density(pi_p, y, pi_q).value, DensityMode::Algebraic};
}

LogDensityValue closed_form_info_density_gaussian_scalar(double x, double y, double snr) {
  if (!(snr > 0.0)) {
    throw std::invalid_argument("closed_form_info_density_gaussian_scalar: snr must be > 0");
  }
  const double resid = y - std::sqrt(snr) * x;
  const double value =
      0.5 * std::log1p(snr) + 0.5 * (y * y / (1.0 + snr) - resid * resid);
  return {value, DensityMode::Analytic};
}

double closed_form_info_density_conditional_mean(double x, double snr) {
  if (!(snr > 0.0)) {
    throw std::invalid_argument("closed_form_info_density_conditional_mean: snr must be > 0");
  }
  return 0.5 * std::log1p(snr) + 0.5 * (snr / (1.0 + snr)) * (x * x - 1.0);
}

}  // namespace infoest
