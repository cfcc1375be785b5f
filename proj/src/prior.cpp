#include "infoest/prior.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace infoest {

namespace {

double log_sum_exp(const std::vector<double>& logs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : logs) m = std::max(m, v);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double v : logs) s += std::exp(v - m);
  return m + std::log(s);
}

}  // namespace

ScalarPrior ScalarPrior::gaussian(double mean, double variance) {
  if (!(variance > 0.0)) {
    throw std::invalid_argument("ScalarPrior::gaussian: variance must be > 0");
  }
  ScalarPrior p;
  p.kind_ = Kind::Gaussian;
  p.components_ = {{1.0, mean, variance}};
  return p;
}

ScalarPrior ScalarPrior::two_point(double x0, double x1, double p1) {
  if (!(p1 > 0.0 && p1 < 1.0)) {
    throw std::invalid_argument("ScalarPrior::two_point: p must lie in (0,1)");
  }
  ScalarPrior p;
  p.kind_ = Kind::TwoPoint;
  p.x0_ = x0;
  p.x1_ = x1;
  p.p1_ = p1;
  return p;
}

ScalarPrior ScalarPrior::mixture(std::vector<MixtureComponent> components) {
  if (components.empty()) {
    throw std::invalid_argument("ScalarPrior::mixture: need at least one component");
  }
  double total = 0.0;
  for (const auto& c : components) {
    if (!(c.weight > 0.0)) throw std::invalid_argument("mixture weights must be > 0");
    if (!(c.variance > 0.0)) throw std::invalid_argument("mixture variances must be > 0");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("mixture weights must sum to 1");
  }
  ScalarPrior p;
  p.kind_ = Kind::Mixture;
  p.components_ = std::move(components);
  return p;
}

bool ScalarPrior::is_point_mass() const {
  return kind_ == Kind::TwoPoint && x0_ == x1_;
}

double ScalarPrior::mean() const {
  switch (kind_) {
    case Kind::TwoPoint:
      return (1.0 - p1_) * x0_ + p1_ * x1_;
    default: {
      double m = 0.0;
      for (const auto& c : components_) m += c.weight * c.mean;
      return m;
    }
  }
}

double ScalarPrior::second_moment() const {
  switch (kind_) {
    case Kind::TwoPoint:
      return (1.0 - p1_) * x0_ * x0_ + p1_ * x1_ * x1_;
    default: {
      double m2 = 0.0;
      for (const auto& c : components_) m2 += c.weight * (c.variance + c.mean * c.mean);
      return m2;
    }
  }
}

double ScalarPrior::variance() const {
  const double m = mean();
  return second_moment() - m * m;
}

double ScalarPrior::fourth_moment() const {
  switch (kind_) {
    case Kind::TwoPoint:
      return (1.0 - p1_) * std::pow(x0_, 4) + p1_ * std::pow(x1_, 4);
    default: {
      // E[(m + sZ)^4] = m^4 + 6 m^2 s^2 + 3 s^4 per component.
      double m4 = 0.0;
      for (const auto& c : components_) {
        const double m2 = c.mean * c.mean;
        m4 += c.weight * (m2 * m2 + 6.0 * m2 * c.variance + 3.0 * c.variance * c.variance);
      }
      return m4;
    }
  }
}

double ScalarPrior::sample(CounterRng& rng) const {
  switch (kind_) {
    case Kind::TwoPoint:
      return rng.uniform01() <= p1_ ? x1_ : x0_;
    case Kind::Gaussian:
      return components_[0].mean + std::sqrt(components_[0].variance) * rng.normal();
    case Kind::Mixture: {
      double u = rng.uniform01();
      for (const auto& c : components_) {
        if (u <= c.weight) {
          return c.mean + std::sqrt(c.variance) * rng.normal();
        }
        u -= c.weight;
      }
      const auto& last = components_.back();
      return last.mean + std::sqrt(last.variance) * rng.normal();
    }
  }
  return 0.0;
}

namespace {

// Acklam's rational approximation of the standard normal quantile, refined by
// one Halley step; ~1e-15 absolute error.
double normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw std::invalid_argument("normal_quantile: u must lie in (0,1)");
  }
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (u < plow) {
    const double q = std::sqrt(-2.0 * std::log(u));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (u <= 1.0 - plow) {
    const double q = u - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - u));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - u;
  const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
  const double g = e / pdf;
  return x - g / (1.0 + 0.5 * x * g);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

double ScalarPrior::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) {
    throw std::invalid_argument("ScalarPrior::quantile: u must lie in (0,1)");
  }
  switch (kind_) {
    case Kind::TwoPoint: {
      const double lo = std::min(x0_, x1_), hi = std::max(x0_, x1_);
      const double p_lo = (x0_ <= x1_) ? 1.0 - p1_ : p1_;
      return u <= p_lo ? lo : hi;
    }
    case Kind::Gaussian:
      return components_[0].mean + std::sqrt(components_[0].variance) * normal_quantile(u);
    case Kind::Mixture: {
      auto cdf = [this](double x) {
        double f = 0.0;
        for (const auto& c : components_) {
          f += c.weight * normal_cdf((x - c.mean) / std::sqrt(c.variance));
        }
        return f;
      };
      double lo = 0.0, hi = 0.0;
      for (const auto& c : components_) {
        lo = std::min(lo, c.mean - 12.0 * std::sqrt(c.variance));
        hi = std::max(hi, c.mean + 12.0 * std::sqrt(c.variance));
      }
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (cdf(mid) < u ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
  return 0.0;
}

const std::vector<MixtureComponent>& ScalarPrior::components() const {
  if (kind_ == Kind::TwoPoint) {
    throw std::logic_error("ScalarPrior::components: two-point prior has none");
  }
  return components_;
}

double ScalarPrior::two_point_x0() const {
  if (kind_ != Kind::TwoPoint) throw std::logic_error("not a two-point prior");
  return x0_;
}
double ScalarPrior::two_point_x1() const {
  if (kind_ != Kind::TwoPoint) throw std::logic_error("not a two-point prior");
  return x1_;
}
double ScalarPrior::two_point_p1() const {
  if (kind_ != Kind::TwoPoint) throw std::logic_error("not a two-point prior");
  return p1_;
}

namespace {

struct PosteriorMoments {
  double mean;
  double second_moment;
};

PosteriorMoments posterior_moments(const ScalarPrior& prior, const GaussianObservation& obs) {
  const double s = obs.scale, v = obs.noise_variance, y = obs.value;
  if (!(v > 0.0)) {
    throw std::invalid_argument("GaussianObservation: noise_variance must be > 0");
  }
  switch (prior.kind()) {
    case ScalarPrior::Kind::TwoPoint: {
      const double x0 = prior.two_point_x0(), x1 = prior.two_point_x1();
      const double p1 = prior.two_point_p1();
      // log odds of x1 against x0; likelihoods N(y; s*x, v).
      const double ll1 = -(y - s * x1) * (y - s * x1) / (2.0 * v);
      const double ll0 = -(y - s * x0) * (y - s * x0) / (2.0 * v);
      const double logit = std::log(p1 / (1.0 - p1)) + ll1 - ll0;
      const double w1 = 1.0 / (1.0 + std::exp(-logit));
      return {(1.0 - w1) * x0 + w1 * x1, (1.0 - w1) * x0 * x0 + w1 * x1 * x1};
    }
    default: {
      const auto& comps = prior.components();
      if (comps.size() == 1) {
        const double m = comps[0].mean, var = comps[0].variance;
        const double prec = 1.0 / var + s * s / v;
        const double pvar = 1.0 / prec;
        const double pmean = pvar * (m / var + s * y / v);
        return {pmean, pvar + pmean * pmean};
      }
      // Per-component conjugate update; component weights reweighted by the
      // evidence N(y; s*m_c, s^2 var_c + v), stabilized in log space.
      std::vector<double> logw(comps.size());
      std::vector<double> pmean(comps.size()), pvar(comps.size());
      for (std::size_t c = 0; c < comps.size(); ++c) {
        const double m = comps[c].mean, var = comps[c].variance;
        const double evid_var = s * s * var + v;
        logw[c] = std::log(comps[c].weight) - 0.5 * std::log(evid_var) -
                  (y - s * m) * (y - s * m) / (2.0 * evid_var);
        const double prec = 1.0 / var + s * s / v;
        pvar[c] = 1.0 / prec;
        pmean[c] = pvar[c] * (m / var + s * y / v);
      }
      const double lse = log_sum_exp(logw);
      double mean = 0.0, m2 = 0.0;
      for (std::size_t c = 0; c < comps.size(); ++c) {
        const double w = std::exp(logw[c] - lse);
        mean += w * pmean[c];
        m2 += w * (pvar[c] + pmean[c] * pmean[c]);
      }
      return {mean, m2};
    }
  }
}

}  // namespace

double posterior_mean(const ScalarPrior& prior, const GaussianObservation& obs) {
  if (obs.scale == 0.0) return prior.mean();
  return posterior_moments(prior, obs).mean;
}

double posterior_second_moment(const ScalarPrior& prior, const GaussianObservation& obs) {
  if (obs.scale == 0.0) return prior.second_moment();
  return posterior_moments(prior, obs).second_moment;
}

const GaussHermiteRule& gauss_hermite(int order) {
  static std::map<int, GaussHermiteRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  // Golub-Welsch on the Hermite Jacobi matrix, then rescale so the rule
  // integrates against the standard normal density: node = sqrt(2) x,
  // weight = w / sqrt(pi).
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int i = 1; i < order; ++i) {
    const double off = std::sqrt(i / 2.0);
    jacobi(i, i - 1) = off;
    jacobi(i - 1, i) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  GaussHermiteRule rule;
  rule.nodes = std::sqrt(2.0) * solver.eigenvalues();
  rule.weights = solver.eigenvectors().row(0).transpose().array().square();
  return cache.emplace(order, std::move(rule)).first->second;
}

double expect_under_channel(const ScalarPrior& prior, double snr,
                            const std::function<double(double, double)>& f) {
  if (snr < 0.0) throw std::invalid_argument("expect_under_channel: snr must be >= 0");
  const double s = std::sqrt(snr);

  auto outer_atoms = [&prior](const GaussHermiteRule& rule,
                              std::vector<double>& xs, std::vector<double>& ws) {
    xs.clear();
    ws.clear();
    if (prior.kind() == ScalarPrior::Kind::TwoPoint) {
      xs = {prior.two_point_x0(), prior.two_point_x1()};
      ws = {1.0 - prior.two_point_p1(), prior.two_point_p1()};
      return;
    }
    for (const auto& c : prior.components()) {
      const double sd = std::sqrt(c.variance);
      for (int i = 0; i < rule.nodes.size(); ++i) {
        xs.push_back(c.mean + sd * rule.nodes[i]);
        ws.push_back(c.weight * rule.weights[i]);
      }
    }
  };

  double prev = std::numeric_limits<double>::quiet_NaN();
  for (int order = 16; order <= 512; order *= 2) {
    const auto& rule = gauss_hermite(order);
    std::vector<double> xs, ws;
    outer_atoms(rule, xs, ws);
    double total = 0.0;
    for (std::size_t a = 0; a < xs.size(); ++a) {
      double inner = 0.0;
      for (int i = 0; i < rule.nodes.size(); ++i) {
        inner += rule.weights[i] * f(xs[a], s * xs[a] + rule.nodes[i]);
      }
      total += ws[a] * inner;
    }
    if (std::isfinite(prev) && std::abs(total - prev) < 1e-10) return total;
    prev = total;
  }
  return prev;
}

double mmse_scalar(const ScalarPrior& prior, double snr) {
  if (snr < 0.0) throw std::invalid_argument("mmse_scalar: snr must be >= 0");
  if (snr == 0.0) return prior.variance();
  const double s = std::sqrt(snr);
  return expect_under_channel(prior, snr, [&](double x, double y) {
    const double m = posterior_mean(prior, {s, 1.0, y});
    return (x - m) * (x - m);
  });
}

double mse_mismatched(const ScalarPrior& p, const ScalarPrior& q, double snr) {
  if (snr < 0.0) throw std::invalid_argument("mse_mismatched: snr must be >= 0");
  if (snr == 0.0) {
    const double d = p.mean() - q.mean();
    return p.variance() + d * d;
  }
  const double s = std::sqrt(snr);
  return expect_under_channel(p, snr, [&](double x, double y) {
    const double m = posterior_mean(q, {s, 1.0, y});
    return (x - m) * (x - m);
  });
}

}  // namespace infoest
