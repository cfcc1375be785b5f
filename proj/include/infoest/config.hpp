#pragma once

#include <json.hpp>

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "infoest/experiments.hpp"

namespace infoest {

/// Assertion switches of a verify run. variance_target overrides the
/// catalogue's quadrature target when finite ("auto" keeps it).
struct AssertionSpec {
  bool zero_mean = true;
  bool variance = true;
  bool algebraic_gap = true;
  double variance_target = std::numeric_limits<double>::quiet_NaN();
};

/// A parsed experiment configuration file. Unknown fields anywhere in the
/// document are rejected.
struct CliConfig {
  ExperimentSpec spec;
  AssertionSpec assertions;
  std::string out_path;
  std::string sweep_param;            // "snr" | "T" (sweep command)
  std::vector<double> sweep_values;
  int bins = 10;
};

CliConfig parse_config(const nlohmann::json& doc);
CliConfig parse_config_text(const std::string& text);

/// Round-trip serialization; written into every CSV header so a run is
/// reproducible from its own output.
nlohmann::json config_to_json(const CliConfig& config);

nlohmann::json prior_to_json(const ScalarPrior& prior);
ScalarPrior prior_from_json(const nlohmann::json& doc);

/// CSV emission. Every writer puts "# config <one-line json>" first.
void write_reports_csv(std::ostream& os, const CliConfig& config,
                       const std::vector<PathOutcome>& outcomes);
void write_summary_csv(std::ostream& os, const CliConfig& config,
                       const IdentitySummary& summary);
void write_sweep_csv(std::ostream& os, const CliConfig& config,
                     const std::vector<std::pair<double, IdentitySummary>>& rows);
void write_cdf_csv(std::ostream& os, const CliConfig& config, const EmpiricalCdf& cdf);

}  // namespace infoest
