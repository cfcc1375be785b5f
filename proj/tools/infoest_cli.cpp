// Experiment runner for the information-estimation identity catalogue.
//
// Subcommands:
//   verify          run one identity and check zero-mean / variance / gap
//   sweep           rerun an identity over a parameter list (snr, T, blocks)
//   cdf             emit the empirical CDF of a closed-form tracking error
//   list-identities print the catalogue
//
// Exit codes: 0 all assertions pass, 2 statistical failure, 3 algebraic-gap
// failure, 4 configuration error.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "infoest/config.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitStatistical = 2;
constexpr int kExitGap = 3;
constexpr int kExitConfig = 4;

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<long long> paths;
  std::optional<int> steps;
  std::optional<std::string> mode;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON experiment config")->required();
  cmd->add_option("--out", args.out_path, "output CSV path (overrides config)");
  cmd->add_option("--seed", args.seed, "master seed (overrides config)");
  cmd->add_option("--paths", args.paths, "path count (overrides config)");
  cmd->add_option("--steps", args.steps, "grid steps (overrides both axes)");
  cmd->add_option("--mode", args.mode, "algebraic|analytic (overrides config)");
}

infoest::CliConfig load_config(const CommonArgs& args) {
  std::ifstream in(args.config_path);
  if (!in) throw std::invalid_argument("cannot open config: " + args.config_path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  infoest::CliConfig config = infoest::parse_config_text(text);
  if (!args.out_path.empty()) config.out_path = args.out_path;
  if (args.seed) config.spec.master_seed = *args.seed;
  if (args.paths) config.spec.n_paths = *args.paths;
  if (args.steps) {
    config.spec.time_steps = *args.steps;
    config.spec.snr_steps = *args.steps;
  }
  if (args.mode) {
    if (*args.mode == "algebraic") {
      config.spec.mode = infoest::DensityMode::Algebraic;
    } else if (*args.mode == "analytic") {
      config.spec.mode = infoest::DensityMode::Analytic;
    } else {
      throw std::invalid_argument("--mode must be algebraic or analytic");
    }
  }
  return config;
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& fn) {
  if (path.empty()) return;
  std::ofstream os(path);
  if (!os) throw std::invalid_argument("cannot open output: " + path);
  fn(os);
}

struct FailureRecord {
  std::string assertion;
  double observed = 0.0;
  double target = 0.0;
  double se = 0.0;
};

void print_failure(const FailureRecord& f) {
  std::cout << "FAIL {\"assertion\":\"" << f.assertion << "\",\"observed\":" << f.observed
            << ",\"target\":" << f.target << ",\"se\":" << f.se << "}\n";
}

int run_verify(const infoest::CliConfig& config) {
  using namespace infoest;
  IdentitySummary summary;
  if (config.out_path.empty()) {
    summary = run_identity(config.spec);
  } else {
    // Keep the rows for the per-path CSV and aggregate the same values, shard
    // by shard, so the summary matches the file exactly.
    const std::vector<PathOutcome> outcomes = collect_identity(config.spec);
    write_file(config.out_path,
               [&](std::ostream& os) { write_reports_csv(os, config, outcomes); });
    constexpr std::size_t kShard = 4096;
    std::vector<MomentAccumulator> shards((outcomes.size() + kShard - 1) / kShard);
    double max_gap = 0.0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      shards[i / kShard].add(outcomes[i].report.left);
      max_gap = std::max(max_gap, std::abs(outcomes[i].report.gap) /
                                      (1.0 + std::abs(outcomes[i].report.left)));
    }
    summary.left = reduce_pairwise(std::move(shards)).stats();
    summary.max_rel_gap = max_gap;
    summary.analytic_variance = analytic_variance_target(config.spec);
  }
  write_summary_csv(std::cout, config, summary);

  std::vector<FailureRecord> statistical;
  std::vector<FailureRecord> gap;
  if (config.assertions.zero_mean) {
    const double target = analytic_mean_target(config.spec);
    if (!within_sigma(summary.left.mean, target, summary.left.std_error_mean)) {
      statistical.push_back({"zero_mean", summary.left.mean, target,
                             summary.left.std_error_mean});
    }
  }
  if (config.assertions.variance) {
    double target = config.assertions.variance_target;
    if (!std::isfinite(target)) target = summary.analytic_variance;
    if (std::isfinite(target) &&
        !within_sigma(summary.left.variance, target, summary.left.std_error_variance)) {
      statistical.push_back({"variance", summary.left.variance, target,
                             summary.left.std_error_variance});
    }
  }
  if (config.assertions.algebraic_gap && config.spec.mode == DensityMode::Algebraic &&
      summary.max_rel_gap > kAlgebraicGapTolerance) {
    gap.push_back({"algebraic_gap", summary.max_rel_gap, kAlgebraicGapTolerance, 0.0});
  }
  for (const auto& f : gap) print_failure(f);
  for (const auto& f : statistical) print_failure(f);
  if (!gap.empty()) return kExitGap;
  if (!statistical.empty()) return kExitStatistical;
  std::cout << "PASS " << config.spec.identity << "\n";
  return kExitOk;
}

int run_sweep(infoest::CliConfig config) {
  using namespace infoest;
  if (config.sweep_param.empty()) {
    throw std::invalid_argument("sweep: config needs a sweep block");
  }
  std::vector<std::pair<double, IdentitySummary>> rows;
  for (double value : config.sweep_values) {
    ExperimentSpec spec = config.spec;
    if (config.sweep_param == "snr") {
      spec.snr = value;
    } else if (config.sweep_param == "T") {
      spec.T = value;
    } else {
      spec.blocks = static_cast<int>(value);
    }
    rows.emplace_back(value, run_identity(spec));
  }
  write_sweep_csv(std::cout, config, rows);
  write_file(config.out_path,
             [&](std::ostream& os) { write_sweep_csv(os, config, rows); });
  return kExitOk;
}

int run_cdf(const infoest::CliConfig& config) {
  using namespace infoest;
  if (config.spec.identity != "coupling_b_z" && config.spec.identity != "coupling_c_z") {
    throw std::invalid_argument("cdf: closed-form couplings only (coupling_b_z, coupling_c_z)");
  }
  const std::vector<PathOutcome> outcomes = collect_identity(config.spec);
  std::vector<double> values;
  values.reserve(outcomes.size());
  for (const auto& out : outcomes) values.push_back(out.report.left);
  const EmpiricalCdf cdf = make_empirical_cdf(std::move(values));
  if (config.out_path.empty()) {
    write_cdf_csv(std::cout, config, cdf);
  } else {
    write_file(config.out_path, [&](std::ostream& os) { write_cdf_csv(os, config, cdf); });
    std::cout << "PASS cdf " << config.spec.identity << " n=" << outcomes.size()
              << " band=" << cdf.band_halfwidth << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pathwise information-estimation identity verifier"};
  app.require_subcommand(1);

  CommonArgs verify_args, sweep_args, cdf_args;
  CLI::App* verify = app.add_subcommand("verify", "run one identity with assertions");
  add_common(verify, verify_args);
  CLI::App* sweep = app.add_subcommand("sweep", "run an identity over a parameter list");
  add_common(sweep, sweep_args);
  CLI::App* cdf = app.add_subcommand("cdf", "emit an empirical CDF with band");
  add_common(cdf, cdf_args);
  CLI::App* list = app.add_subcommand("list-identities", "print the identity catalogue");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (list->parsed()) {
      for (const auto& name : infoest::identity_catalogue()) std::cout << name << "\n";
      return kExitOk;
    }
    if (verify->parsed()) return run_verify(load_config(verify_args));
    if (sweep->parsed()) return run_sweep(load_config(sweep_args));
    if (cdf->parsed()) return run_cdf(load_config(cdf_args));
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
