#include "infoest/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace infoest {

void MomentAccumulator::add(double x) {
  // One-pass update (Pebay's formulas).
  const long long n1 = n_;
  n_ += 1;
  const double delta = x - mean_;
  const double dn = delta / static_cast<double>(n_);
  const double dn2 = dn * dn;
  const double term1 = delta * dn * static_cast<double>(n1);
  mean_ += dn;
  m4_ += term1 * dn2 * (n_ * n_ - 3.0 * n_ + 3.0) + 6.0 * dn2 * m2_ - 4.0 * dn * m3_;
  m3_ += term1 * dn * (n_ - 2.0) - 3.0 * dn * m2_;
  m2_ += term1;
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_), nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const double delta = other.mean_ - mean_;
  const double d2 = delta * delta;
  const double m2 = m2_ + other.m2_ + d2 * na * nb / n;
  const double m3 = m3_ + other.m3_ + d2 * delta * na * nb * (na - nb) / (n * n) +
                    3.0 * delta * (na * other.m2_ - nb * m2_) / n;
  const double m4 = m4_ + other.m4_ +
                    d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n) +
                    6.0 * d2 * (na * na * other.m2_ + nb * nb * m2_) / (n * n) +
                    4.0 * delta * (na * other.m3_ - nb * m3_) / n;
  mean_ += delta * nb / n;
  m2_ = m2;
  m3_ = m3;
  m4_ = m4;
  n_ += other.n_;
}

EstimatorStats MomentAccumulator::stats() const {
  EstimatorStats s;
  s.n = n_;
  if (n_ == 0) return s;
  s.mean = mean_;
  const double n = static_cast<double>(n_);
  s.variance = m2_ / n;
  s.fourth_central = m4_ / n;
  s.std_error_mean = std::sqrt(s.variance / n);
  const double var_of_var = std::max(s.fourth_central - s.variance * s.variance, 0.0);
  s.std_error_variance = std::sqrt(var_of_var / n);
  return s;
}

double EmpiricalCdf::cdf_at(double x) const {
  const auto* begin = sorted.data();
  const auto* end = begin + sorted.size();
  return static_cast<double>(std::upper_bound(begin, end, x) - begin) /
         static_cast<double>(sorted.size());
}

EmpiricalCdf make_empirical_cdf(std::vector<double> values, double alpha) {
  if (values.empty()) throw std::invalid_argument("make_empirical_cdf: empty sample");
  std::sort(values.begin(), values.end());
  EmpiricalCdf cdf;
  cdf.sorted = Eigen::Map<Eigen::VectorXd>(values.data(), values.size());
  cdf.band_halfwidth = std::sqrt(std::log(2.0 / alpha) / (2.0 * values.size()));
  return cdf;
}

double ks_statistic_vs_standard_normal(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("ks statistic: empty sample");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = 0.5 * std::erfc(-values[i] / std::sqrt(2.0));
    sup = std::max(sup, std::max(f - i / n, (i + 1) / n - f));
  }
  return sup;
}

int worker_count() {
  if (const char* env = std::getenv("INFOEST_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::uint64_t n, const std::function<void(std::uint64_t)>& fn) {
  const int workers = std::min<std::uint64_t>(worker_count(), n == 0 ? 1 : n);
  if (workers <= 1) {
    for (std::uint64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  constexpr std::uint64_t kChunk = 256;
  auto worker = [&]() {
    try {
      while (!failed.load(std::memory_order_relaxed)) {
        const std::uint64_t begin = next.fetch_add(kChunk);
        if (begin >= n) return;
        const std::uint64_t end = std::min(begin + kChunk, n);
        for (std::uint64_t i = begin; i < end; ++i) fn(i);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mu);
      if (!error) error = std::current_exception();
      failed.store(true, std::memory_order_relaxed);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

MomentAccumulator reduce_pairwise(std::vector<MomentAccumulator> shards) {
  std::size_t count = shards.size();
  while (count > 1) {
    std::size_t out = 0;
    for (std::size_t i = 0; i + 1 < count; i += 2) {
      shards[i].merge(shards[i + 1]);
      shards[out++] = shards[i];
    }
    if (count % 2 == 1) shards[out++] = shards[count - 1];
    count = out;
  }
  return shards.empty() ? MomentAccumulator{} : shards[0];
}

namespace {

constexpr std::uint64_t kShardWidth = 4096;

}  // namespace

EstimatorStats run_experiment(const std::function<double(std::uint64_t)>& per_path,
                              long long n_paths) {
  if (n_paths < 100) {
    throw std::invalid_argument("run_experiment: need at least 100 paths");
  }
  const std::uint64_t n = static_cast<std::uint64_t>(n_paths);
  const std::uint64_t n_shards = (n + kShardWidth - 1) / kShardWidth;
  std::vector<MomentAccumulator> shards(n_shards);
  parallel_for(n_shards, [&](std::uint64_t s) {
    const std::uint64_t begin = s * kShardWidth;
    const std::uint64_t end = std::min(begin + kShardWidth, n);
    for (std::uint64_t i = begin; i < end; ++i) shards[s].add(per_path(i));
  });
  return reduce_pairwise(std::move(shards)).stats();
}

std::vector<double> collect_samples(const std::function<double(std::uint64_t)>& per_path,
                                    long long n_paths) {
  if (n_paths < 1) throw std::invalid_argument("collect_samples: need paths");
  std::vector<double> out(static_cast<std::size_t>(n_paths));
  parallel_for(static_cast<std::uint64_t>(n_paths),
               [&](std::uint64_t i) { out[i] = per_path(i); });
  return out;
}

std::vector<BinStats> conditional_mean_by_bins(const std::vector<double>& x,
                                               const std::vector<double>& z, int n_bins) {
  if (n_bins < 2) throw std::invalid_argument("conditional_mean_by_bins: need >= 2 bins");
  if (x.size() != z.size() || x.empty()) {
    throw std::invalid_argument("conditional_mean_by_bins: size mismatch");
  }
  std::vector<double> sorted_x = x;
  std::sort(sorted_x.begin(), sorted_x.end());
  // Quantile edges close each bin from above (bin b is x <= edge_b); heavy
  // ties collapse duplicate edges, and an edge at the maximum would leave an
  // empty top bin, so it is dropped too.
  std::vector<double> edges;
  for (int b = 1; b < n_bins; ++b) {
    const std::size_t idx = static_cast<std::size_t>(
        static_cast<double>(b) * sorted_x.size() / n_bins);
    edges.push_back(sorted_x[std::min(idx, sorted_x.size() - 1)]);
  }
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  while (!edges.empty() && edges.back() >= sorted_x.back()) edges.pop_back();

  const int bins = static_cast<int>(edges.size()) + 1;
  std::vector<MomentAccumulator> acc(bins);
  std::vector<double> lo(bins, std::numeric_limits<double>::infinity());
  std::vector<double> hi(bins, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int b = static_cast<int>(
        std::lower_bound(edges.begin(), edges.end(), x[i]) - edges.begin());
    acc[b].add(z[i]);
    lo[b] = std::min(lo[b], x[i]);
    hi[b] = std::max(hi[b], x[i]);
  }
  std::vector<BinStats> out;
  for (int b = 0; b < bins; ++b) {
    if (acc[b].count() == 0) {
      throw std::runtime_error("conditional_mean_by_bins: empty bin " + std::to_string(b));
    }
    out.push_back({lo[b], hi[b], acc[b].stats()});
  }
  return out;
}

std::vector<MartingaleCheck> martingale_increment_test(const Eigen::MatrixXd& partial_sums) {
  const int n_paths = static_cast<int>(partial_sums.rows());
  const int n_checkpoints = static_cast<int>(partial_sums.cols());
  if (n_paths < 2 || n_checkpoints < 2) {
    throw std::invalid_argument("martingale_increment_test: need paths and checkpoints");
  }
  std::vector<MartingaleCheck> out;
  for (int c = 0; c + 1 < n_checkpoints; ++c) {
    MartingaleCheck check;
    check.from = c;
    check.to = c + 1;
    MomentAccumulator plain, against;
    for (int p = 0; p < n_paths; ++p) {
      const double incr = partial_sums(p, c + 1) - partial_sums(p, c);
      const double past = std::clamp(partial_sums(p, c), -1.0, 1.0);
      plain.add(incr);
      against.add(incr * past);
    }
    check.plain = plain.stats();
    check.against_past = against.stats();
    out.push_back(check);
  }
  return out;
}

}  // namespace infoest
