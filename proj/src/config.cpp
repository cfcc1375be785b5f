#include "infoest/config.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <stdexcept>

namespace infoest {

namespace {

using nlohmann::json;

void require_known_fields(const json& obj, const std::set<std::string>& allowed,
                          const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key)) {
      throw std::invalid_argument("unknown field \"" + key + "\" in " + where);
    }
  }
}

ProcessPrior process_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("type")) {
    throw std::invalid_argument("process: expected object with \"type\"");
  }
  const std::string type = doc.at("type");
  if (type == "constant") {
    require_known_fields(doc, {"type", "prior"}, "process");
    return ProcessPrior::constant(prior_from_json(doc.at("prior")));
  }
  if (type == "piecewise_iid") {
    require_known_fields(doc, {"type", "prior", "segments"}, "process");
    return ProcessPrior::piecewise_iid(prior_from_json(doc.at("prior")),
                                       doc.at("segments").get<int>());
  }
  if (type == "ou") {
    require_known_fields(doc, {"type", "mean_reversion", "diffusion", "initial"},
                         "process");
    return ProcessPrior::ornstein_uhlenbeck(doc.at("mean_reversion").get<double>(),
                                            doc.at("diffusion").get<double>(),
                                            prior_from_json(doc.at("initial")));
  }
  throw std::invalid_argument("process: unknown type \"" + type + "\"");
}

json process_to_json(const ProcessPrior& process) {
  switch (process.kind()) {
    case ProcessPrior::Kind::ConstantX:
      return {{"type", "constant"}, {"prior", prior_to_json(process.scalar_prior())}};
    case ProcessPrior::Kind::PiecewiseConstantIID:
      return {{"type", "piecewise_iid"},
              {"prior", prior_to_json(process.scalar_prior())},
              {"segments", process.segments()}};
    case ProcessPrior::Kind::OrnsteinUhlenbeck:
      return {{"type", "ou"},
              {"mean_reversion", process.mean_reversion()},
              {"diffusion", process.diffusion()},
              {"initial", prior_to_json(process.scalar_prior())}};
  }
  throw std::logic_error("unreachable");
}

PhiSpec phi_from_json(const json& doc) {
  require_known_fields(doc, {"kind", "amplitude"}, "phi");
  const std::string kind = doc.at("kind");
  if (kind == "identity") return PhiSpec::identity();
  if (kind == "observable_drift") {
    return PhiSpec::observable_drift(doc.at("amplitude").get<double>());
  }
  throw std::invalid_argument("phi: unknown kind \"" + kind + "\"");
}

json phi_to_json(const PhiSpec& phi) {
  if (phi.kind == PhiSpec::Kind::Identity) return {{"kind", "identity"}};
  return {{"kind", "observable_drift"}, {"amplitude", phi.amplitude}};
}

}  // namespace

ScalarPrior prior_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("type")) {
    throw std::invalid_argument("prior: expected object with \"type\"");
  }
  const std::string type = doc.at("type");
  if (type == "gaussian") {
    require_known_fields(doc, {"type", "mean", "variance"}, "prior");
    return ScalarPrior::gaussian(doc.at("mean").get<double>(),
                                 doc.at("variance").get<double>());
  }
  if (type == "two_point") {
    require_known_fields(doc, {"type", "x0", "x1", "p"}, "prior");
    return ScalarPrior::two_point(doc.at("x0").get<double>(), doc.at("x1").get<double>(),
                                  doc.at("p").get<double>());
  }
  if (type == "mixture") {
    require_known_fields(doc, {"type", "components"}, "prior");
    std::vector<MixtureComponent> components;
    for (const auto& c : doc.at("components")) {
      require_known_fields(c, {"weight", "mean", "variance"}, "mixture component");
      components.push_back({c.at("weight").get<double>(), c.at("mean").get<double>(),
                            c.at("variance").get<double>()});
    }
    return ScalarPrior::mixture(std::move(components));
  }
  throw std::invalid_argument("prior: unknown type \"" + type + "\"");
}

nlohmann::json prior_to_json(const ScalarPrior& prior) {
  switch (prior.kind()) {
    case ScalarPrior::Kind::Gaussian:
      return {{"type", "gaussian"},
              {"mean", prior.components()[0].mean},
              {"variance", prior.components()[0].variance}};
    case ScalarPrior::Kind::TwoPoint:
      return {{"type", "two_point"},
              {"x0", prior.two_point_x0()},
              {"x1", prior.two_point_x1()},
              {"p", prior.two_point_p1()}};
    case ScalarPrior::Kind::Mixture: {
      json components = json::array();
      for (const auto& c : prior.components()) {
        components.push_back(
            {{"weight", c.weight}, {"mean", c.mean}, {"variance", c.variance}});
      }
      return {{"type", "mixture"}, {"components", components}};
    }
  }
  throw std::logic_error("unreachable");
}

CliConfig parse_config(const nlohmann::json& doc) {
  static const std::set<std::string> kTop = {
      "identity",  "mode",     "negative_control", "n_paths",   "master_seed",
      "T",         "time_steps", "snr",            "snr_steps", "segments",
      "blocks",    "quad_nodes", "prior",          "prior_q",   "process",
      "phi",       "out",      "sweep",            "bins",      "assertions"};
  if (!doc.is_object()) throw std::invalid_argument("config: expected a JSON object");
  require_known_fields(doc, kTop, "config");

  CliConfig config;
  ExperimentSpec& spec = config.spec;
  if (!doc.contains("identity")) throw std::invalid_argument("config: identity required");
  spec.identity = doc.at("identity").get<std::string>();
  const auto& catalogue = identity_catalogue();
  if (std::find(catalogue.begin(), catalogue.end(), spec.identity) == catalogue.end()) {
    throw std::invalid_argument("config: unknown identity \"" + spec.identity + "\"");
  }
  if (doc.contains("mode")) {
    const std::string mode = doc.at("mode");
    if (mode == "algebraic") {
      spec.mode = DensityMode::Algebraic;
    } else if (mode == "analytic") {
      spec.mode = DensityMode::Analytic;
    } else {
      throw std::invalid_argument("config: mode must be algebraic or analytic");
    }
  }
  spec.negative_control = doc.value("negative_control", false);
  spec.n_paths = doc.value("n_paths", 1000LL);
  spec.master_seed = doc.value("master_seed", 1ULL);
  spec.T = doc.value("T", 1.0);
  spec.time_steps = doc.value("time_steps", 4096);
  spec.snr = doc.value("snr", 1.0);
  spec.snr_steps = doc.value("snr_steps", 4096);
  spec.segments = doc.value("segments", 1);
  spec.blocks = doc.value("blocks", 0);
  spec.quad_nodes = doc.value("quad_nodes", 256);
  if (doc.contains("prior")) spec.prior = prior_from_json(doc.at("prior"));
  if (doc.contains("prior_q")) spec.prior_q = prior_from_json(doc.at("prior_q"));
  if (doc.contains("process")) spec.process = process_from_json(doc.at("process"));
  if (doc.contains("phi")) spec.phi = phi_from_json(doc.at("phi"));
  config.out_path = doc.value("out", std::string());
  config.bins = doc.value("bins", 10);
  if (doc.contains("sweep")) {
    const json& sweep = doc.at("sweep");
    require_known_fields(sweep, {"param", "values"}, "sweep");
    config.sweep_param = sweep.at("param").get<std::string>();
    if (config.sweep_param != "snr" && config.sweep_param != "T" &&
        config.sweep_param != "blocks") {
      throw std::invalid_argument("sweep: param must be snr, T or blocks");
    }
    config.sweep_values = sweep.at("values").get<std::vector<double>>();
    if (config.sweep_values.empty()) {
      throw std::invalid_argument("sweep: values must be non-empty");
    }
  }
  if (doc.contains("assertions")) {
    const json& a = doc.at("assertions");
    require_known_fields(a, {"zero_mean", "variance", "algebraic_gap", "variance_target"},
                         "assertions");
    config.assertions.zero_mean = a.value("zero_mean", true);
    config.assertions.variance = a.value("variance", true);
    config.assertions.algebraic_gap = a.value("algebraic_gap", true);
    if (a.contains("variance_target")) {
      config.assertions.variance_target = a.at("variance_target").get<double>();
    }
  }
  return config;
}

CliConfig parse_config_text(const std::string& text) {
  return parse_config(nlohmann::json::parse(text));
}

nlohmann::json config_to_json(const CliConfig& config) {
  const ExperimentSpec& spec = config.spec;
  json doc;
  doc["identity"] = spec.identity;
  doc["mode"] = to_string(spec.mode);
  if (spec.negative_control) doc["negative_control"] = true;
  doc["n_paths"] = spec.n_paths;
  doc["master_seed"] = spec.master_seed;
  doc["T"] = spec.T;
  doc["time_steps"] = spec.time_steps;
  doc["snr"] = spec.snr;
  doc["snr_steps"] = spec.snr_steps;
  doc["segments"] = spec.segments;
  doc["blocks"] = spec.blocks;
  doc["quad_nodes"] = spec.quad_nodes;
  doc["prior"] = prior_to_json(spec.prior);
  if (spec.prior_q) doc["prior_q"] = prior_to_json(*spec.prior_q);
  if (spec.process) doc["process"] = process_to_json(*spec.process);
  if (spec.phi.kind != PhiSpec::Kind::Identity) doc["phi"] = phi_to_json(spec.phi);
  if (!config.out_path.empty()) doc["out"] = config.out_path;
  doc["bins"] = config.bins;
  if (!config.sweep_param.empty()) {
    doc["sweep"] = {{"param", config.sweep_param}, {"values", config.sweep_values}};
  }
  json assertions;
  assertions["zero_mean"] = config.assertions.zero_mean;
  assertions["variance"] = config.assertions.variance;
  assertions["algebraic_gap"] = config.assertions.algebraic_gap;
  if (std::isfinite(config.assertions.variance_target)) {
    assertions["variance_target"] = config.assertions.variance_target;
  }
  doc["assertions"] = assertions;
  return doc;
}

namespace {

void write_config_header(std::ostream& os, const CliConfig& config) {
  os << "# config " << config_to_json(config).dump() << "\n";
}

}  // namespace

void write_reports_csv(std::ostream& os, const CliConfig& config,
                       const std::vector<PathOutcome>& outcomes) {
  write_config_header(os, config);
  os << "identity,seed,left,right,gap,mode\n";
  os.precision(17);
  for (const auto& out : outcomes) {
    const auto& r = out.report;
    os << r.identity << ',' << r.stream << ',' << r.left << ',' << r.right << ','
       << r.gap << ',' << to_string(r.mode) << "\n";
  }
}

void write_summary_csv(std::ostream& os, const CliConfig& config,
                       const IdentitySummary& summary) {
  write_config_header(os, config);
  os << "identity,n,mean,se_mean,var,se_var,analytic_var,max_rel_gap\n";
  os.precision(17);
  os << config.spec.identity << ',' << summary.left.n << ',' << summary.left.mean << ','
     << summary.left.std_error_mean << ',' << summary.left.variance << ','
     << summary.left.std_error_variance << ',' << summary.analytic_variance << ','
     << summary.max_rel_gap << "\n";
}

void write_sweep_csv(std::ostream& os, const CliConfig& config,
                     const std::vector<std::pair<double, IdentitySummary>>& rows) {
  write_config_header(os, config);
  os << "identity," << config.sweep_param
     << ",n,mean,se_mean,var,se_var,analytic_var,max_rel_gap\n";
  os.precision(17);
  for (const auto& [value, summary] : rows) {
    os << config.spec.identity << ',' << value << ',' << summary.left.n << ','
       << summary.left.mean << ',' << summary.left.std_error_mean << ','
       << summary.left.variance << ',' << summary.left.std_error_variance << ','
       << summary.analytic_variance << ',' << summary.max_rel_gap << "\n";
  }
}

void write_cdf_csv(std::ostream& os, const CliConfig& config, const EmpiricalCdf& cdf) {
  write_config_header(os, config);
  os << "value,cdf,band\n";
  os.precision(17);
  const auto n = cdf.sorted.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    os << cdf.sorted[i] << ',' << static_cast<double>(i + 1) / static_cast<double>(n)
       << ',' << cdf.band_halfwidth << "\n";
  }
}

}  // namespace infoest
