#include "infoest/identities.hpp"

#include <cmath>
#include <stdexcept>

namespace infoest {

namespace {

bool is_standard_normal(const ScalarPrior& prior) {
  if (prior.kind() != ScalarPrior::Kind::Gaussian) return false;
  const auto& c = prior.components()[0];
  return c.mean == 0.0 && c.variance == 1.0;
}

void require_standard_normal(const ScalarPrior& prior, const char* where) {
  if (!is_standard_normal(prior)) {
    throw std::invalid_argument(std::string(where) +
                                ": closed form needs the standard normal prior");
  }
}

// sum_k h[k] (g[k+1] - g[k]) with the requested evaluation point.
double stochastic_sum(const Eigen::VectorXd& h, const Eigen::VectorXd& g, ItoRule rule) {
  const int n = static_cast<int>(g.size()) - 1;
  const auto dg = (g.tail(n) - g.head(n)).array();
  if (rule == ItoRule::LeftPoint) return (h.head(n).array() * dg).sum();
  return (h.tail(n).array() * dg).sum();
}

double left_square_sum(const Eigen::VectorXd& v, double step) {
  const int n = static_cast<int>(v.size()) - 1;
  return v.head(n).array().square().sum() * step;
}

}  // namespace

IdentityReport scalar_Z(const CouplingSample& sample, const ScalarPrior& prior,
                        const IdentityOptions& opts) {
  if (sample.kind != CouplingKind::BrownianMotion) {
    throw std::invalid_argument("scalar_Z: needs a Brownian-motion coupling sample");
  }
  const int n = sample.y.n_steps();
  const double dg = sample.y.step();
  Eigen::VectorXd xhat(n + 1);
  for (int k = 0; k <= n; ++k) {
    xhat[k] = coupling_posterior_mean(prior, sample, k);
  }
  const Eigen::VectorXd resid =
      Eigen::VectorXd::Constant(n + 1, sample.x) - xhat;
  const double err_int = left_square_sum(resid, dg);
  const double right = stochastic_sum(resid, sample.noise.values, opts.rule);

  double density;
  if (opts.mode == DensityMode::Algebraic) {
    const SamplePath x_path(sample.y.grid, Eigen::VectorXd::Constant(n + 1, sample.x));
    density = information_density(x_path, sample.y, SamplePath(sample.y.grid, xhat)).value;
  } else {
    require_standard_normal(prior, "scalar_Z (analytic)");
    const double snr = sample.y.grid.t1;
    // Endpoint sufficient statistic in channel-condition form: Y_snr / sqrt(snr).
    density = closed_form_info_density_gaussian_scalar(
                  sample.x, sample.y.back() / std::sqrt(snr), snr)
                  .value;
  }
  const double left = density - 0.5 * err_int;
  return {"scalar_z", sample.seed.stream_index, left, right, left - right, opts.mode};
}

IdentityReport scalar_Z_mismatch(const CouplingSample& sample, const ScalarPrior& p,
                                 const ScalarPrior& q, const IdentityOptions& opts) {
  if (sample.kind != CouplingKind::BrownianMotion) {
    throw std::invalid_argument("scalar_Z_mismatch: needs a Brownian-motion coupling sample");
  }
  if (opts.mode != DensityMode::Algebraic) {
    throw std::invalid_argument("scalar_Z_mismatch: algebraic mode only");
  }
  const int n = sample.y.n_steps();
  const double dg = sample.y.step();
  Eigen::VectorXd mp(n + 1), mq(n + 1);
  for (int k = 0; k <= n; ++k) {
    mp[k] = coupling_posterior_mean(p, sample, k);
    mq[k] = coupling_posterior_mean(q, sample, k);
  }
  if (!mp.allFinite() || !mq.allFinite()) {
    throw std::runtime_error("scalar_Z_mismatch: posterior weights vanished under Q");
  }
  const double log_p_over_q =
      mismatch_log_rn(SamplePath(sample.y.grid, mp), SamplePath(sample.y.grid, mq),
                      sample.y)
          .value;
  double err_diff = 0.0;
  for (int k = 0; k < n; ++k) {
    const double eq = sample.x - mq[k];
    const double ep = sample.x - mp[k];
    err_diff += (eq * eq - ep * ep) * dg;
  }
  const double left = log_p_over_q - 0.5 * err_diff;
  const double right = stochastic_sum(mp - mq, sample.noise.values, opts.rule);
  return {"scalar_z_mismatch", sample.seed.stream_index, left, right, left - right,
          opts.mode};
}

IdentityReport duncan_D(const SamplePath& x, const SamplePath& y,
                        const FilterOutput& filter, const SamplePath& w,
                        const IdentityOptions& opts) {
  require_same_grid(x, y, "duncan_D");
  require_same_grid(w, y, "duncan_D");
  require_same_grid(filter.estimate, y, "duncan_D");
  if (opts.mode != DensityMode::Algebraic) {
    throw std::invalid_argument("duncan_D: algebraic mode only");
  }
  const Eigen::VectorXd resid = x.values - filter.estimate.values;
  const double err_int = left_square_sum(resid, x.step());
  const double density = information_density(x, y, filter.estimate).value;
  const double left = density - 0.5 * err_int;
  const double right = stochastic_sum(resid, w.values, opts.rule);
  return {"duncan_d", 0, left, right, left - right, opts.mode};
}

IdentityReport mismatch_M(const SamplePath& x, const SamplePath& y,
                          const FilterOutput& filter_p, const FilterOutput& filter_q,
                          const SamplePath& w, const IdentityOptions& opts) {
  require_same_grid(x, y, "mismatch_M");
  require_same_grid(w, y, "mismatch_M");
  if (opts.mode != DensityMode::Algebraic) {
    throw std::invalid_argument("mismatch_M: algebraic mode only");
  }
  const Eigen::VectorXd& pi_p = filter_p.estimate.values;
  const Eigen::VectorXd& pi_q = filter_q.estimate.values;
  const int n = x.n_steps();
  const double dt = x.step();
  const double log_p_over_q =
      mismatch_log_rn(filter_p.estimate, filter_q.estimate, y).value;
  const auto eq = (pi_q.head(n) - x.values.head(n)).array();
  const auto ep = (pi_p.head(n) - x.values.head(n)).array();
  const double err_diff = (eq.square() - ep.square()).sum() * dt;
  const double left = log_p_over_q - 0.5 * err_diff;
  const double right = stochastic_sum(pi_p - pi_q, w.values, opts.rule);
  return {"mismatch_m", 0, left, right, left - right, opts.mode};
}

IdentityReport feedback_D_phi(const PhiSpec& phi, const ScalarPrior& prior,
                              const SamplePath& x, const SamplePath& y,
                              const SamplePath& w, const IdentityOptions& opts) {
  if (opts.mode != DensityMode::Algebraic) {
    throw std::invalid_argument("feedback_D_phi: algebraic mode only");
  }
  const SamplePath drift = phi_path(phi, x, y);
  const FilterOutput drift_hat = causal_phi_filter(phi, prior, y);
  IdentityReport r = duncan_D(drift, y, drift_hat, w, opts);
  r.identity = "feedback_d_phi";
  return r;
}

IdentityReport feedback_M_phi(const PhiSpec& phi, const ScalarPrior& p,
                              const ScalarPrior& q, const SamplePath& x,
                              const SamplePath& y, const SamplePath& w,
                              const IdentityOptions& opts) {
  if (opts.mode != DensityMode::Algebraic) {
    throw std::invalid_argument("feedback_M_phi: algebraic mode only");
  }
  const SamplePath drift = phi_path(phi, x, y);
  const FilterOutput hat_p = causal_phi_filter(phi, p, y);
  const FilterOutput hat_q = causal_phi_filter(phi, q, y);
  IdentityReport r = mismatch_M(drift, y, hat_p, hat_q, w, opts);
  r.identity = "feedback_m_phi";
  return r;
}

namespace {

// Shared snr-route quantities of the sheet channel: the information density
// built from the per-segment Girsanov sums along snr, the time-and-snr
// integrated smoothing error, and the stochastic-integral side.
struct SheetDecomposition {
  double density = 0.0;
  double err_int = 0.0;  // int_0^snr int_0^T (X - smoother)^2 dt dg
  double right = 0.0;
};

SheetDecomposition sheet_decomposition(const ScalarPrior& prior, int segments,
                                       const Eigen::VectorXd& segment_x,
                                       const BrownianSheetGrid& sheet, ItoRule rule) {
  if (sheet.snr_grid.t0 != 0.0) {
    throw std::invalid_argument("sheet identities: snr grid must start at 0");
  }
  const int nt = sheet.time_grid.n_steps;
  const int ng = sheet.snr_grid.n_steps;
  if (segments < 1 || nt % segments != 0 || segment_x.size() != segments) {
    throw std::invalid_argument("sheet identities: grid incompatible with segment count");
  }
  const int width = nt / segments;
  const double seg_span = width * sheet.time_grid.step();  // segment duration c
  const double dg = sheet.snr_grid.step();

  SheetDecomposition out;
  for (int seg = 0; seg < segments; ++seg) {
    const double xi = segment_x[seg];
    const Eigen::VectorXd dw = sheet.segment_snr_increments(seg * width, (seg + 1) * width);
    // Segment channel along snr: Y_j = g_j * c * X_i + W_j, noise variance c per
    // unit snr, so the sufficient statistic has (scale, variance) = (g c, g c).
    Eigen::VectorXd noise(ng + 1), obs(ng + 1), xhat(ng + 1);
    noise[0] = 0.0;
    for (int j = 0; j < ng; ++j) noise[j + 1] = noise[j] + dw[j];
    xhat[0] = prior.mean();
    obs[0] = 0.0;
    for (int j = 1; j <= ng; ++j) {
      const double g = sheet.snr_grid.point(j);
      obs[j] = g * seg_span * xi + noise[j];
      xhat[j] = posterior_mean(prior, {g * seg_span, g * seg_span, obs[j]});
    }
    const Eigen::VectorXd resid = Eigen::VectorXd::Constant(ng + 1, xi) - xhat;
    out.right += stochastic_sum(resid, noise, rule);
    out.err_int += seg_span * left_square_sum(resid, dg);
    // Girsanov sums along snr: sum (X - X̂) dY - (c/2) sum (X^2 - X̂^2) dg.
    const auto dy = (obs.tail(ng) - obs.head(ng)).array();
    const auto rk = resid.head(ng).array();
    const auto xk = Eigen::ArrayXd::Constant(ng, xi);
    const auto mk = xhat.head(ng).array();
    out.density += (rk * dy).sum() -
                   0.5 * seg_span * (xk.square() - mk.square()).sum() * dg;
  }
  return out;
}

}  // namespace

IdentityReport sheet_N(const ScalarPrior& prior, int segments,
                       const Eigen::VectorXd& segment_x, const BrownianSheetGrid& sheet,
                       const IdentityOptions& opts) {
  if (opts.mode != DensityMode::Algebraic) {
    throw std::invalid_argument("sheet_N: algebraic mode only");
  }
  const SheetDecomposition d = sheet_decomposition(prior, segments, segment_x, sheet, opts.rule);
  const double left = d.density - 0.5 * d.err_int;
  return {"sheet_n", 0, left, d.right, left - d.right, opts.mode};
}

IdentityReport causal_anticausal_J(const ScalarPrior& prior, int segments,
                                   const SamplePath& x, const SamplePath& y,
                                   const SamplePath& w, const IdentityOptions& opts) {
  require_same_grid(x, y, "causal_anticausal_J");
  require_same_grid(w, y, "causal_anticausal_J");
  if (opts.mode != DensityMode::Algebraic) {
    throw std::invalid_argument("causal_anticausal_J: algebraic mode only");
  }
  const int n = x.n_steps();
  const double dt = x.step();

  const FilterOutput forward = causal_filter_piecewise(prior, segments, y);

  // Time-reversed signal, observation and driving noise:
  //   X~_t = X_{T-t}, Y~_t = Y_T - Y_{T-t}, B_t = W_T - W_{T-t}.
  // With the left rule the reversed triple is again an exact discrete channel.
  Eigen::VectorXd xr(n + 1), yr(n + 1), br(n + 1);
  for (int k = 0; k <= n; ++k) {
    xr[k] = x[std::max(n - 1 - k, 0)];
    yr[k] = y[n] - y[n - k];
    br[k] = w[n] - w[n - k];
  }
  const SamplePath x_rev(x.grid, std::move(xr));
  const SamplePath y_rev(x.grid, std::move(yr));
  const SamplePath b_rev(x.grid, std::move(br));
  const FilterOutput backward = causal_filter_piecewise(prior, segments, y_rev);

  // The reversal maps sum X dW to sum X~ dB term by term; anything else means
  // the inputs were not a (signal, channel output, noise) triple on one grid.
  const double fwd_sig = stochastic_sum(x.values, w.values, ItoRule::LeftPoint);
  const double rev_sig = stochastic_sum(x_rev.values, b_rev.values, ItoRule::LeftPoint);
  if (std::abs(fwd_sig - rev_sig) > 1e-12 * (1.0 + std::abs(fwd_sig))) {
    throw std::invalid_argument(
        "causal_anticausal_J: reversed signal integral mismatch; process not "
        "piecewise-constant on this grid");
  }

  const Eigen::VectorXd res_f = x.values - forward.estimate.values;
  const Eigen::VectorXd res_b = x_rev.values - backward.estimate.values;
  const double causal_err = left_square_sum(res_f, dt);
  const double anticausal_err = left_square_sum(res_b, dt);
  const double left = causal_err - anticausal_err;

  const double density_f = information_density(x, y, forward.estimate).value;
  const double density_b = information_density(x_rev, y_rev, backward.estimate).value;
  const double right =
      2.0 * (stochastic_sum(forward.estimate.values, w.values, opts.rule) -
             stochastic_sum(backward.estimate.values, b_rev.values, opts.rule)) +
      2.0 * (density_f - density_b);
  return {"causal_anticausal_j", 0, left, right, left - right, opts.mode};
}

IdentityReport causal_vs_noncausal(const ScalarPrior& prior, int segments,
                                   const Eigen::VectorXd& segment_x,
                                   const BrownianSheetGrid& sheet,
                                   const IdentityOptions& opts) {
  if (opts.mode != DensityMode::Algebraic) {
    throw std::invalid_argument("causal_vs_noncausal: algebraic mode only");
  }
  if (sheet.snr_grid.t1 != 1.0) {
    throw std::invalid_argument("causal_vs_noncausal: snr grid must end at 1");
  }

  // Time route: filtering on the top-level slice, a standard channel at snr 1.
  Eigen::VectorXd dw1 = sheet.top_level_time_increments();
  const int nt = sheet.time_grid.n_steps;
  Eigen::VectorXd w1(nt + 1);
  w1[0] = 0.0;
  for (int i = 0; i < nt; ++i) w1[i + 1] = w1[i] + dw1[i];
  const SamplePath w_slice(sheet.time_grid, std::move(w1));
  const SamplePath x_path = expand_segments(segment_x, sheet.time_grid);
  const SamplePath y_slice = simulate_channel(x_path, w_slice);
  const FilterOutput filt = causal_filter_piecewise(prior, segments, y_slice);

  const Eigen::VectorXd resid = x_path.values - filt.estimate.values;
  const double causal_err = left_square_sum(resid, sheet.time_grid.step());
  const double density_time = information_density(x_path, y_slice, filt.estimate).value;
  const double right_time = stochastic_sum(resid, w_slice.values, opts.rule);

  // snr route: smoothing across levels, read off the same sheet.
  const SheetDecomposition d = sheet_decomposition(prior, segments, segment_x, sheet, opts.rule);

  const double left = causal_err - d.err_int;
  const double right = 2.0 * (d.right - right_time) + 2.0 * (density_time - d.density);
  return {"causal_vs_noncausal", 0, left, right, left - right, opts.mode};
}

double ztilde_gamma(const ScalarPrior& prior, double x, double noise, double gamma) {
  if (!(gamma > 0.0)) {
    throw std::invalid_argument("ztilde_gamma: gamma must be > 0");
  }
  const double s = std::sqrt(gamma);
  const double y = s * x + noise;
  const GaussianObservation obs{s, 1.0, y};
  const double m = posterior_mean(prior, obs);
  const double m2 = posterior_second_moment(prior, obs);
  const double e = x - m;
  return 0.5 * (m2 - x * m - e * e + (y / s) * e);
}

double additive_coupling_Z(const ScalarPrior& prior, double x, double noise, double snr,
                           int intervals) {
  if (!(snr > 0.0)) throw std::invalid_argument("additive_coupling_Z: snr must be > 0");
  if (intervals < 2 || intervals % 2 != 0) {
    throw std::invalid_argument("additive_coupling_Z: intervals must be even and >= 2");
  }
  // g(u) = 2u Ztilde_{u^2}; continuous at u = 0 with value noise * (x - prior mean).
  auto integrand = [&](double u) {
    if (u == 0.0) return noise * (x - prior.mean());
    const double y = u * x + noise;
    const GaussianObservation obs{u, 1.0, y};
    const double m = posterior_mean(prior, obs);
    const double m2 = posterior_second_moment(prior, obs);
    const double e = x - m;
    return u * (m2 - x * m - e * e) + y * e;
  };
  const double upper = std::sqrt(snr);
  const double h = upper / intervals;
  double sum = integrand(0.0) + integrand(upper);
  for (int i = 1; i < intervals; ++i) {
    sum += integrand(i * h) * ((i % 2 != 0) ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

double closed_form_Z(CouplingKind kind, double x, double noise, double snr) {
  if (!(snr > 0.0)) throw std::invalid_argument("closed_form_Z: snr must be > 0");
  switch (kind) {
    case CouplingKind::AdditiveStandardGaussian:
      return 0.5 * (std::log1p(snr) - noise * noise * std::log1p(snr) +
                    2.0 * x * noise * std::atan(std::sqrt(snr)));
    case CouplingKind::IndependentGaussians:
      return (-noise * noise * snr + 2.0 * x * noise * std::sqrt(snr) + snr) /
             (2.0 * (1.0 + snr));
    case CouplingKind::BrownianMotion:
      throw std::invalid_argument("closed_form_Z: no closed form for the Brownian coupling");
  }
  throw std::logic_error("unreachable");
}

double independent_coupling_Z_blocks(const CouplingSample& sample) {
  if (sample.kind != CouplingKind::IndependentGaussians) {
    throw std::invalid_argument("independent_coupling_Z_blocks: wrong coupling kind");
  }
  const int m = sample.y.n_steps();
  const double snr = sample.y.grid.t1;
  const double delta = sample.y.step();
  // Block Riemann sum of the squared error at block right endpoints.
  double block_sum = 0.0;
  for (int i = 1; i <= m; ++i) {
    const double g = sample.y.grid.point(i);
    const double mhat =
        posterior_mean(ScalarPrior::gaussian(0.0, 1.0), {std::sqrt(g), 1.0, sample.y[i]});
    block_sum += (sample.x - mhat) * (sample.x - mhat) * delta;
  }
  const double density =
      closed_form_info_density_gaussian_scalar(sample.x, sample.y[m], snr).value;
  return density - 0.5 * block_sum;
}

IdentityReport cross_coupling_check(double x, const SamplePath& w,
                                    const ScalarPrior& prior,
                                    const IdentityOptions& opts) {
  require_standard_normal(prior, "cross_coupling_check");
  if (w.grid.t0 != 0.0 || w.grid.t1 != 1.0) {
    throw std::invalid_argument("cross_coupling_check: needs a Brownian path on [0,1]");
  }
  const int n = w.n_steps();
  const double dg = w.step();
  const double w1 = w.back();

  // Additive coupling Y_g = sqrt(g) X + W_1 and Brownian coupling Y~_g = g X + W_g
  // share the path; their snr = 1 endpoints coincide bit for bit.
  Eigen::VectorXd err_add(n + 1), resid_bm(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double g = w.grid.point(k);
    const double y_add = std::sqrt(g) * x + w1;
    const double m_add = (g == 0.0) ? prior.mean()
                                    : posterior_mean(prior, {std::sqrt(g), 1.0, y_add});
    err_add[k] = x - m_add;
    const double y_bm = g * x + w[k];
    const double m_bm = (g == 0.0) ? prior.mean() : posterior_mean(prior, {g, g, y_bm});
    resid_bm[k] = x - m_bm;
  }
  const double err_add_int = left_square_sum(err_add, dg);
  const double err_bm_int = left_square_sum(resid_bm, dg);
  const double ito_bm = stochastic_sum(resid_bm, w.values, opts.rule);

  const double density = closed_form_info_density_gaussian_scalar(x, x + w1, 1.0).value;
  const double left = density - 0.5 * err_add_int;
  const double right = ito_bm + 0.5 * err_bm_int - 0.5 * err_add_int;
  return {"cross_coupling", 0, left, right, left - right, DensityMode::Analytic};
}

}  // namespace infoest
