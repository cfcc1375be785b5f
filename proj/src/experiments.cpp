#include "infoest/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace infoest {

namespace {

bool is_standard_normal(const ScalarPrior& prior) {
  if (prior.kind() != ScalarPrior::Kind::Gaussian) return false;
  const auto& c = prior.components()[0];
  return c.mean == 0.0 && c.variance == 1.0;
}

ProcessPrior effective_process(const ExperimentSpec& spec) {
  if (spec.process) return *spec.process;
  return ProcessPrior::constant(spec.prior);
}

const ScalarPrior& process_marginal(const ProcessPrior& process) {
  return process.scalar_prior();
}

int process_segments(const ProcessPrior& process) {
  return process.kind() == ProcessPrior::Kind::PiecewiseConstantIID ? process.segments() : 1;
}

FilterOutput exact_causal_filter(const ProcessPrior& process, const SamplePath& y) {
  switch (process.kind()) {
    case ProcessPrior::Kind::ConstantX:
      return causal_filter_constant_x(process.scalar_prior(), y);
    case ProcessPrior::Kind::PiecewiseConstantIID:
      return causal_filter_piecewise(process.scalar_prior(), process.segments(), y);
    case ProcessPrior::Kind::OrnsteinUhlenbeck:
      return kalman_bucy(process, y);
  }
  throw std::logic_error("unreachable");
}

}  // namespace

const std::vector<std::string>& identity_catalogue() {
  static const std::vector<std::string> kCatalogue = {
      "scalar_z",       "scalar_z_mismatch", "duncan_d",
      "mismatch_m",     "feedback_d_phi",    "feedback_m_phi",
      "sheet_n",        "causal_anticausal_j", "causal_vs_noncausal",
      "coupling_b_z",   "coupling_c_z",      "cross_coupling"};
  return kCatalogue;
}

double scalar_information_density(const ScalarPrior& prior, double x, double y,
                                  double snr) {
  if (!(snr > 0.0)) {
    throw std::invalid_argument("scalar_information_density: snr must be > 0");
  }
  const double s = std::sqrt(snr);
  const double resid = y - s * x;
  const double log_cond = -0.5 * resid * resid;  // up to the common normal constant
  // Marginal of Y is a finite Gaussian mixture; log-sum-exp over components.
  double max_term = -std::numeric_limits<double>::infinity();
  std::vector<double> terms;
  auto push = [&](double weight, double mean, double variance) {
    const double d = y - mean;
    const double t = std::log(weight) - 0.5 * std::log(variance) - 0.5 * d * d / variance;
    terms.push_back(t);
    max_term = std::max(max_term, t);
  };
  if (prior.kind() == ScalarPrior::Kind::TwoPoint) {
    push(1.0 - prior.two_point_p1(), s * prior.two_point_x0(), 1.0);
    push(prior.two_point_p1(), s * prior.two_point_x1(), 1.0);
  } else {
    for (const auto& c : prior.components()) {
      push(c.weight, s * c.mean, snr * c.variance + 1.0);
    }
  }
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - max_term);
  const double log_marg = max_term + std::log(acc);
  return log_cond - log_marg;
}

double scalar_information_density_conditional_mean(const ScalarPrior& prior, double x,
                                                   double snr) {
  const double s = std::sqrt(snr);
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (int order = 32; order <= 512; order *= 2) {
    const auto& rule = gauss_hermite(order);
    double total = 0.0;
    for (int i = 0; i < rule.nodes.size(); ++i) {
      total += rule.weights[i] *
               scalar_information_density(prior, x, s * x + rule.nodes[i], snr);
    }
    if (std::isfinite(prev) && std::abs(total - prev) < 1e-10) return total;
    prev = total;
  }
  return prev;
}

double simpson_integral(const std::function<double(double)>& f, double lower, double upper,
                        double tol) {
  if (!(upper > lower)) return 0.0;
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (int intervals = 32; intervals <= 1 << 16; intervals *= 2) {
    const double h = (upper - lower) / intervals;
    double sum = f(lower) + f(upper);
    for (int i = 1; i < intervals; ++i) {
      sum += f(lower + i * h) * ((i % 2 != 0) ? 4.0 : 2.0);
    }
    const double total = sum * h / 3.0;
    if (std::isfinite(prev) && std::abs(total - prev) < tol) return total;
    prev = total;
  }
  return prev;
}

double ou_riccati_error_integral(double a, double b, double p0, double T, int fine_steps) {
  const double h = T / fine_steps;
  auto rhs = [a, b](double p) { return -2.0 * a * p + b * b - p * p; };
  double p = p0;
  double integral = 0.0;
  for (int k = 0; k < fine_steps; ++k) {
    const double k1 = rhs(p);
    const double k2 = rhs(p + 0.5 * h * k1);
    const double k3 = rhs(p + 0.5 * h * k2);
    const double k4 = rhs(p + h * k3);
    const double pn = p + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    integral += 0.5 * h * (p + pn);
    p = pn;
  }
  return integral;
}

std::function<PathOutcome(std::uint64_t)> make_path_runner(const ExperimentSpec& spec) {
  const IdentityOptions opts{spec.mode, spec.negative_control
                                            ? ItoRule::RightPointAnticipating
                                            : ItoRule::LeftPoint};
  const std::string id = spec.identity;

  if (id == "scalar_z" || id == "scalar_z_mismatch") {
    const TimeGrid grid = make_uniform_grid(0.0, spec.snr, spec.snr_steps);
    const ScalarPrior p = spec.prior;
    const std::optional<ScalarPrior> q = spec.prior_q;
    if (id == "scalar_z_mismatch" && !q) {
      throw std::invalid_argument("scalar_z_mismatch: prior_q required");
    }
    const std::uint64_t master = spec.master_seed;
    return [=](std::uint64_t i) {
      CounterRng rng({master, i});
      const double x = p.sample(rng);
      CouplingSample sample = simulate_bm_coupling(x, grid, rng, {master, i});
      IdentityReport r = (id == "scalar_z") ? scalar_Z(sample, p, opts)
                                            : scalar_Z_mismatch(sample, p, *q, opts);
      r.stream = i;
      return PathOutcome{std::move(r), x};
    };
  }

  if (id == "duncan_d" || id == "mismatch_m") {
    const TimeGrid grid = make_uniform_grid(0.0, spec.T, spec.time_steps);
    const ProcessPrior process = effective_process(spec);
    const std::optional<ScalarPrior> q = spec.prior_q;
    if (id == "mismatch_m") {
      if (!q) throw std::invalid_argument("mismatch_m: prior_q required");
      if (process.kind() == ProcessPrior::Kind::OrnsteinUhlenbeck) {
        throw std::invalid_argument("mismatch_m: constant/piecewise processes only");
      }
    }
    const std::uint64_t master = spec.master_seed;
    return [=](std::uint64_t i) {
      CounterRng rng({master, i});
      const SamplePath x = process.sample_path(grid, rng);
      const SamplePath w = sample_brownian(grid, rng);
      const SamplePath y = simulate_channel(x, w);
      IdentityReport r;
      if (id == "duncan_d") {
        r = duncan_D(x, y, exact_causal_filter(process, y), w, opts);
      } else {
        const int segs = process_segments(process);
        const FilterOutput fp = causal_filter_piecewise(process.scalar_prior(), segs, y);
        const FilterOutput fq = causal_filter_piecewise(*q, segs, y);
        r = mismatch_M(x, y, fp, fq, w, opts);
      }
      r.stream = i;
      return PathOutcome{std::move(r), x[0]};
    };
  }

  if (id == "feedback_d_phi" || id == "feedback_m_phi") {
    const TimeGrid grid = make_uniform_grid(0.0, spec.T, spec.time_steps);
    const ProcessPrior process = effective_process(spec);
    if (process.kind() != ProcessPrior::Kind::ConstantX) {
      throw std::invalid_argument(id + ": constant signal required");
    }
    const std::optional<ScalarPrior> q = spec.prior_q;
    if (id == "feedback_m_phi" && !q) {
      throw std::invalid_argument("feedback_m_phi: prior_q required");
    }
    const PhiSpec phi = spec.phi;
    const std::uint64_t master = spec.master_seed;
    return [=](std::uint64_t i) {
      CounterRng rng({master, i});
      const SamplePath x = process.sample_path(grid, rng);
      const SamplePath w = sample_brownian(grid, rng);
      const SamplePath y = simulate_feedback_channel(phi, x, w);
      IdentityReport r =
          (id == "feedback_d_phi")
              ? feedback_D_phi(phi, process.scalar_prior(), x, y, w, opts)
              : feedback_M_phi(phi, process.scalar_prior(), *q, x, y, w, opts);
      r.stream = i;
      return PathOutcome{std::move(r), x[0]};
    };
  }

  if (id == "sheet_n" || id == "causal_vs_noncausal") {
    const TimeGrid time_grid = make_uniform_grid(0.0, spec.T, spec.time_steps);
    const TimeGrid snr_grid = make_uniform_grid(0.0, spec.snr, spec.snr_steps);
    if (id == "causal_vs_noncausal" && spec.snr != 1.0) {
      throw std::invalid_argument("causal_vs_noncausal: snr must be 1");
    }
    const int segments = std::max(spec.segments, 1);
    const ScalarPrior p = spec.prior;
    const std::uint64_t master = spec.master_seed;
    return [=](std::uint64_t i) {
      CounterRng rng({master, i});
      Eigen::VectorXd seg(segments);
      for (int s = 0; s < segments; ++s) seg[s] = p.sample(rng);
      const BrownianSheetGrid sheet = sample_sheet(time_grid, snr_grid, rng);
      IdentityReport r = (id == "sheet_n")
                             ? sheet_N(p, segments, seg, sheet, opts)
                             : causal_vs_noncausal(p, segments, seg, sheet, opts);
      r.stream = i;
      return PathOutcome{std::move(r), seg[0]};
    };
  }

  if (id == "causal_anticausal_j") {
    const TimeGrid grid = make_uniform_grid(0.0, spec.T, spec.time_steps);
    const ProcessPrior process = effective_process(spec);
    if (process.kind() == ProcessPrior::Kind::OrnsteinUhlenbeck) {
      throw std::invalid_argument("causal_anticausal_j: constant/piecewise processes only");
    }
    const int segments = process_segments(process);
    const ScalarPrior marginal = process_marginal(process);
    const std::uint64_t master = spec.master_seed;
    return [=](std::uint64_t i) {
      CounterRng rng({master, i});
      const SamplePath x = process.sample_path(grid, rng);
      const SamplePath w = sample_brownian(grid, rng);
      const SamplePath y = simulate_channel(x, w);
      IdentityReport r = causal_anticausal_J(marginal, segments, x, y, w, opts);
      r.stream = i;
      return PathOutcome{std::move(r), x[0]};
    };
  }

  if (id == "coupling_b_z") {
    const ScalarPrior p = spec.prior;
    const double snr = spec.snr;
    const int nodes = spec.quad_nodes;
    const bool closed = is_standard_normal(p);
    const std::uint64_t master = spec.master_seed;
    return [=](std::uint64_t i) {
      CounterRng rng({master, i});
      const double x = p.sample(rng);
      const double noise = rng.normal();
      const double z =
          closed ? closed_form_Z(CouplingKind::AdditiveStandardGaussian, x, noise, snr)
                 : additive_coupling_Z(p, x, noise, snr, nodes);
      return PathOutcome{{"coupling_b_z", i, z, z, 0.0, DensityMode::Analytic}, x};
    };
  }

  if (id == "coupling_c_z") {
    const ScalarPrior p = spec.prior;
    const double snr = spec.snr;
    const int blocks = spec.blocks;
    const bool closed = is_standard_normal(p);
    if (blocks > 0 && !closed) {
      throw std::invalid_argument("coupling_c_z: block construction needs the standard normal prior");
    }
    const std::uint64_t master = spec.master_seed;
    return [=](std::uint64_t i) {
      CounterRng rng({master, i});
      const double x = p.sample(rng);
      double z;
      if (blocks > 0) {
        CouplingSample sample = simulate_independent_coupling(x, snr, blocks, rng, {master, i});
        z = independent_coupling_Z_blocks(sample);
      } else {
        const double noise = rng.normal();
        if (closed) {
          z = closed_form_Z(CouplingKind::IndependentGaussians, x, noise, snr);
        } else {
          const double y = std::sqrt(snr) * x + noise;
          z = scalar_information_density(p, x, y, snr) -
              scalar_information_density_conditional_mean(p, x, snr);
        }
      }
      return PathOutcome{{"coupling_c_z", i, z, z, 0.0, DensityMode::Analytic}, x};
    };
  }

  if (id == "cross_coupling") {
    const TimeGrid grid = make_uniform_grid(0.0, 1.0, spec.snr_steps);
    const ScalarPrior p = spec.prior;
    const std::uint64_t master = spec.master_seed;
    return [=](std::uint64_t i) {
      CounterRng rng({master, i});
      const double x = p.sample(rng);
      const SamplePath w = sample_brownian(grid, rng);
      IdentityReport r = cross_coupling_check(x, w, p, opts);
      r.stream = i;
      return PathOutcome{std::move(r), x};
    };
  }

  throw std::invalid_argument("unknown identity: " + id);
}

double analytic_variance_target(const ExperimentSpec& spec) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const std::string& id = spec.identity;
  const ScalarPrior& p = spec.prior;

  if (id == "scalar_z") {
    return simpson_integral([&](double g) { return mmse_scalar(p, g); }, 0.0, spec.snr);
  }
  if (id == "scalar_z_mismatch") {
    if (!spec.prior_q) return nan;
    return simpson_integral(
        [&](double g) { return mse_mismatched(p, *spec.prior_q, g) - mmse_scalar(p, g); },
        0.0, spec.snr);
  }
  if (id == "duncan_d" || id == "feedback_d_phi") {
    const ProcessPrior process = effective_process(spec);
    switch (process.kind()) {
      case ProcessPrior::Kind::ConstantX:
        return simpson_integral(
            [&](double t) { return mmse_scalar(process.scalar_prior(), t); }, 0.0, spec.T);
      case ProcessPrior::Kind::PiecewiseConstantIID: {
        const double span = spec.T / process.segments();
        return process.segments() *
               simpson_integral(
                   [&](double t) { return mmse_scalar(process.scalar_prior(), t); }, 0.0,
                   span);
      }
      case ProcessPrior::Kind::OrnsteinUhlenbeck:
        return ou_riccati_error_integral(process.mean_reversion(), process.diffusion(),
                                         process.scalar_prior().variance(), spec.T);
    }
  }
  if (id == "mismatch_m" || id == "feedback_m_phi") {
    if (!spec.prior_q) return nan;
    const ProcessPrior process = effective_process(spec);
    const ScalarPrior& marginal = process.scalar_prior();
    const int segs = process_segments(process);
    const double span = spec.T / segs;
    return segs * simpson_integral(
                      [&](double t) {
                        return mse_mismatched(marginal, *spec.prior_q, t) -
                               mmse_scalar(marginal, t);
                      },
                      0.0, span);
  }
  if (id == "sheet_n") {
    const int segs = std::max(spec.segments, 1);
    const double span = spec.T / segs;
    return simpson_integral(
        [&](double g) { return spec.T * mmse_scalar(p, g * span); }, 0.0, spec.snr);
  }
  if (id == "coupling_b_z") {
    if (is_standard_normal(p)) {
      const double l = std::log1p(spec.snr);
      const double a = std::atan(std::sqrt(spec.snr));
      return 0.5 * l * l + a * a;
    }
    return nan;
  }
  if (id == "coupling_c_z") {
    if (spec.blocks > 0) return nan;  // finite-M variance is the study target itself
    if (is_standard_normal(p)) {
      // From Z = (-N^2 snr + 2 X N sqrt(snr) + snr) / (2(1+snr)):
      // (snr^2 Var(N^2) + 4 snr Var(XN)) / (4 (1+snr)^2).
      return spec.snr * (spec.snr + 2.0) /
             (2.0 * (1.0 + spec.snr) * (1.0 + spec.snr));
    }
    return expect_under_channel(p, spec.snr, [&](double x, double y) {
      const double z = scalar_information_density(p, x, y, spec.snr) -
                       scalar_information_density_conditional_mean(p, x, spec.snr);
      return z * z;
    });
  }
  return nan;  // causal_anticausal_j, causal_vs_noncausal, cross_coupling: mean-only targets
}

namespace {

// Identity failures surface with the offending path index attached.
PathOutcome run_guarded(const std::function<PathOutcome(std::uint64_t)>& runner,
                        std::uint64_t i) {
  try {
    return runner(i);
  } catch (const std::exception& e) {
    throw std::runtime_error("path " + std::to_string(i) + ": " + e.what());
  }
}

}  // namespace

IdentitySummary run_identity(const ExperimentSpec& spec) {
  if (spec.n_paths < 100) {
    throw std::invalid_argument("run_identity: need at least 100 paths");
  }
  const auto runner = make_path_runner(spec);
  const std::uint64_t n = static_cast<std::uint64_t>(spec.n_paths);
  constexpr std::uint64_t kShardWidth = 4096;
  const std::uint64_t n_shards = (n + kShardWidth - 1) / kShardWidth;
  std::vector<MomentAccumulator> shard_acc(n_shards);
  std::vector<double> shard_gap(n_shards, 0.0);
  parallel_for(n_shards, [&](std::uint64_t s) {
    const std::uint64_t begin = s * kShardWidth;
    const std::uint64_t end = std::min(begin + kShardWidth, n);
    for (std::uint64_t i = begin; i < end; ++i) {
      const PathOutcome out = run_guarded(runner, i);
      shard_acc[s].add(out.report.left);
      shard_gap[s] = std::max(shard_gap[s],
                              std::abs(out.report.gap) / (1.0 + std::abs(out.report.left)));
    }
  });
  double max_gap = 0.0;
  for (double g : shard_gap) max_gap = std::max(max_gap, g);

  IdentitySummary summary;
  summary.left = reduce_pairwise(std::move(shard_acc)).stats();
  summary.max_rel_gap = max_gap;
  summary.analytic_variance = analytic_variance_target(spec);
  return summary;
}

std::vector<PathOutcome> collect_identity(const ExperimentSpec& spec) {
  if (spec.n_paths < 100) {
    throw std::invalid_argument("collect_identity: need at least 100 paths");
  }
  const auto runner = make_path_runner(spec);
  std::vector<PathOutcome> out(static_cast<std::size_t>(spec.n_paths));
  parallel_for(static_cast<std::uint64_t>(spec.n_paths),
               [&](std::uint64_t i) { out[i] = run_guarded(runner, i); });
  return out;
}

}  // namespace infoest
