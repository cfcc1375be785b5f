#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>

#include "infoest/identities.hpp"
#include "infoest/montecarlo.hpp"
#include "infoest/process.hpp"

namespace infoest {

/// Everything one Monte Carlo verification run needs. Scalar-coupling
/// identities draw their grid from (snr, snr_steps), time identities from
/// (T, time_steps), sheet identities from both.
struct ExperimentSpec {
  std::string identity;
  DensityMode mode = DensityMode::Algebraic;
  bool negative_control = false;

  long long n_paths = 1000;
  std::uint64_t master_seed = 1;

  double T = 1.0;
  int time_steps = 4096;
  double snr = 1.0;
  int snr_steps = 4096;

  int segments = 1;     // piecewise-constant / sheet identities
  int blocks = 0;       // independent coupling; 0 selects the closed-form limit
  int quad_nodes = 256; // additive-coupling quadrature intervals

  ScalarPrior prior = ScalarPrior::gaussian(0.0, 1.0);
  std::optional<ScalarPrior> prior_q;
  std::optional<ProcessPrior> process;
  PhiSpec phi = PhiSpec::identity();
};

/// Identity catalogue exposed to the CLI.
const std::vector<std::string>& identity_catalogue();

/// Per-path outcome: the identity report plus the realized scalar input (first
/// segment value for processes), which the conditional-mean bins need.
struct PathOutcome {
  IdentityReport report;
  double x = 0.0;
};

/// Builds the per-path evaluator; each path i derives its own stream
/// (master_seed, i), so results are reproducible under any scheduling.
std::function<PathOutcome(std::uint64_t)> make_path_runner(const ExperimentSpec& spec);

/// Variance of the identity's left side predicted by the quadrature/closed-form
/// targets; NaN when the catalogue defines none for this configuration.
double analytic_variance_target(const ExperimentSpec& spec);

/// Expectation target of the left side (0 for every identity in the catalogue).
inline double analytic_mean_target(const ExperimentSpec&) { return 0.0; }

struct IdentitySummary {
  EstimatorStats left;
  double max_rel_gap = 0.0;  // max |gap| / (1 + |left|)
  double analytic_variance = std::numeric_limits<double>::quiet_NaN();
};

/// Runs the experiment with deterministic sharded aggregation.
IdentitySummary run_identity(const ExperimentSpec& spec);

/// Runs the experiment keeping every outcome (bins, CDFs, per-path CSV).
std::vector<PathOutcome> collect_identity(const ExperimentSpec& spec);

/// Scalar-channel information density log p(y|x) / p(y) for Y|X ~ N(sqrt(snr) X, 1),
/// exact for the built-in priors (the marginal is a finite Gaussian mixture).
double scalar_information_density(const ScalarPrior& prior, double x, double y, double snr);

/// E[ that | X = x ] by Gauss-Hermite over the noise.
double scalar_information_density_conditional_mean(const ScalarPrior& prior, double x,
                                                   double snr);

/// integral_0^upper of f by adaptive composite Simpson (interval doubling until
/// |change| < tol). Used for the snr/time integrals of the quadrature targets.
double simpson_integral(const std::function<double(double)>& f, double lower, double upper,
                        double tol = 1e-9);

/// Riccati curve P' = -2aP + b^2 - P^2 integrated by RK4 on a fine grid;
/// returns integral_0^T P dt. Target for the OU tracking-error variance.
double ou_riccati_error_integral(double a, double b, double p0, double T,
                                 int fine_steps = 200000);

}  // namespace infoest
