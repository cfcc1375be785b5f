#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace infoest {

/// Moment summary of a Monte Carlo sample. se_mean = sqrt(variance / n);
/// se_variance comes from the delta method with the fourth central moment.
struct EstimatorStats {
  long long n = 0;
  double mean = 0.0;
  double variance = 0.0;
  double std_error_mean = 0.0;
  double std_error_variance = 0.0;
  double fourth_central = 0.0;
};

/// Streaming central moments up to order four with exact merging, so shards
/// processed in any schedule reduce to the same result once merged in index
/// order.
class MomentAccumulator {
 public:
  void add(double x);
  void merge(const MomentAccumulator& other);
  long long count() const { return n_; }
  EstimatorStats stats() const;

 private:
  long long n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0, m3_ = 0.0, m4_ = 0.0;
};

/// Deterministic pairwise tree reduction of shard accumulators in index order;
/// the result is independent of how the shards were scheduled.
MomentAccumulator reduce_pairwise(std::vector<MomentAccumulator> shards);

/// Empirical CDF with a distribution-free band at level 99%:
/// band_halfwidth = sqrt(log(2 / 0.01) / (2 n)).
struct EmpiricalCdf {
  Eigen::VectorXd sorted;
  double band_halfwidth = 0.0;

  double cdf_at(double x) const;
};
EmpiricalCdf make_empirical_cdf(std::vector<double> values, double alpha = 0.01);

/// Kolmogorov-Smirnov sup statistic of a sample against the standard normal CDF.
double ks_statistic_vs_standard_normal(std::vector<double> values);

/// Worker count: INFOEST_THREADS when set, otherwise hardware parallelism.
int worker_count();

/// Runs fn(i) for i in [0, n); work is sharded over the pool but results are
/// written by index, so output order never depends on scheduling.
void parallel_for(std::uint64_t n, const std::function<void(std::uint64_t)>& fn);

/// Evaluates per_path(i) for i in [0, n_paths) and aggregates moments with a
/// deterministic pairwise merge over fixed shards. n_paths >= 100 enforced.
EstimatorStats run_experiment(const std::function<double(std::uint64_t)>& per_path,
                              long long n_paths);

/// Same evaluation, returning the per-path values in index order.
std::vector<double> collect_samples(const std::function<double(std::uint64_t)>& per_path,
                                    long long n_paths);

/// Per-bin statistics of z conditioned on x falling in equal-probability
/// quantile bins (tied quantile edges collapse, so a two-point x yields
/// exactly two bins). Throws if a bin comes out empty.
struct BinStats {
  double x_lo = 0.0;
  double x_hi = 0.0;
  EstimatorStats stats;
};
std::vector<BinStats> conditional_mean_by_bins(const std::vector<double>& x,
                                               const std::vector<double>& z, int n_bins);

/// E[(S_t - S_s) g(past)] for each adjacent checkpoint pair, for g = 1 and
/// g = the past value clipped to [-1, 1]. partial_sums is n_paths rows by
/// n_checkpoints columns.
struct MartingaleCheck {
  int from = 0;
  int to = 0;
  EstimatorStats plain;
  EstimatorStats against_past;
};
std::vector<MartingaleCheck> martingale_increment_test(const Eigen::MatrixXd& partial_sums);

/// The global statistical acceptance convention.
inline constexpr double kSigmaTolerance = 4.0;

inline bool within_sigma(double observed, double target, double se,
                         double n_sigma = kSigmaTolerance) {
  return std::abs(observed - target) <= n_sigma * se;
}

}  // namespace infoest
