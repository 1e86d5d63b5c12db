#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "spectra/errors.hpp"
#include "spectra/rng.hpp"

namespace spectra {

enum class ExperimentKind { Esd, LambdaMax, CompareMp, Custom };

inline std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Esd: return "esd";
    case ExperimentKind::LambdaMax: return "lambda_max";
    case ExperimentKind::CompareMp: return "compare_mp";
    case ExperimentKind::Custom: return "custom";
  }
  return "?";
}

inline ExperimentKind experiment_kind_from_string(const std::string& s) {
  if (s == "esd") return ExperimentKind::Esd;
  if (s == "lambda_max") return ExperimentKind::LambdaMax;
  if (s == "compare_mp") return ExperimentKind::CompareMp;
  if (s == "custom") return ExperimentKind::Custom;
  throw config_error("unknown experiment kind '" + s + "'");
}

/// JSON-facing factor-model description for the factor demo (the `custom`
/// experiment). Loadings may be given explicitly or generated with a fixed
/// column norm (default sqrt(p)) from the master seed.
struct FactorDemoConfig {
  int k = 0;
  std::optional<std::vector<std::vector<double>>> loadings;  // p rows of k
  std::optional<std::vector<double>> mean;
  std::string process = "iid_normal";  // or "ar1"
  double phi = 0.0;
  std::optional<double> loading_column_norm;
  double outlier_margin = 0.5;
};

/// Full description of a Monte Carlo campaign.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Esd;
  int n = 500;
  std::vector<double> y_values = {0.5, 1.0, 1.5, 2.0};
  int tau = 1;
  DistributionSpec distribution = DistributionSpec::standard_normal();
  int replications = 1;
  std::uint64_t master_seed = 20250801;
  bool centered = true;
  std::string output_dir = "out";
  int bins = 60;
  std::vector<int> p_values;  // lambda-max dimension grid; empty = round(y*n)
  std::optional<FactorDemoConfig> factor_model;

  int p_for(double y) const { return static_cast<int>(std::lround(y * n)); }

  void validate() const {
    if (n < 2) throw config_error("n must be >= 2");
    if (replications < 1) throw config_error("replications must be >= 1");
    if (bins < 10) throw config_error("bins must be >= 10");
    if (tau < 1) {
      throw config_error("tau must be >= 1 (the lag-0 baseline of compare_mp is built in)");
    }
    if (tau >= n) throw config_error("tau must be < n");
    if (y_values.empty()) throw config_error("y_values must be non-empty");
    for (double y : y_values) {
      if (!(y > 0.0)) throw config_error("every y must be > 0");
      if (p_for(y) < 1) throw config_error("round(y*n) must be >= 1 for every y");
    }
    if (output_dir.empty()) throw config_error("output_dir must be non-empty");
    for (int p : p_values) {
      if (p < 1) throw config_error("every p in p_values must be >= 1");
    }
    if (!p_values.empty() && experiment != ExperimentKind::LambdaMax) {
      throw config_error("p_values applies only to the lambda_max experiment");
    }
    if (factor_model && experiment != ExperimentKind::Custom) {
      throw config_error("factor_model applies only to the custom (factor demo) experiment");
    }
    if (experiment == ExperimentKind::Custom) {
      if (!factor_model) throw config_error("custom experiment requires factor_model");
      if (y_values.size() != 1) {
        throw config_error("custom experiment takes exactly one y value");
      }
      const FactorDemoConfig& fm = *factor_model;
      if (fm.k < 0) throw config_error("factor_model.k must be >= 0");
      if (fm.process != "iid_normal" && fm.process != "ar1") {
        throw config_error("factor_model.process must be 'iid_normal' or 'ar1'");
      }
      if (fm.process == "ar1" && !(std::abs(fm.phi) < 1.0)) {
        throw config_error("factor_model.phi must lie in (-1, 1)");
      }
    }
  }
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                                const std::string& where) {
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      throw config_error("unknown key '" + item.key() + "' in " + where);
    }
  }
}

inline DistributionSpec distribution_from_json(const nlohmann::json& j) {
  reject_unknown_keys(j, {"kind", "df"}, "distribution");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "standard_normal") return DistributionSpec::standard_normal();
  if (kind == "rademacher") return DistributionSpec::rademacher();
  if (kind == "centered_uniform") return DistributionSpec::centered_uniform();
  if (kind == "student_t") {
    if (!j.contains("df")) throw config_error("student_t distribution requires df");
    try {
      return DistributionSpec::student_t(j.at("df").get<int>());
    } catch (const std::invalid_argument& e) {
      throw config_error(e.what());
    }
  }
  throw config_error("unknown distribution kind '" + kind + "'");
}

inline nlohmann::json distribution_to_json(const DistributionSpec& d) {
  nlohmann::json j;
  switch (d.kind) {
    case DistributionSpec::Kind::StandardNormal: j["kind"] = "standard_normal"; break;
    case DistributionSpec::Kind::Rademacher: j["kind"] = "rademacher"; break;
    case DistributionSpec::Kind::CenteredUniform: j["kind"] = "centered_uniform"; break;
    case DistributionSpec::Kind::StudentT:
      j["kind"] = "student_t";
      j["df"] = d.df;
      break;
  }
  return j;
}

inline FactorDemoConfig factor_model_from_json(const nlohmann::json& j) {
  reject_unknown_keys(
      j, {"k", "loadings", "mean", "process", "phi", "loading_column_norm", "outlier_margin"},
      "factor_model");
  FactorDemoConfig fm;
  if (j.contains("k")) fm.k = j.at("k").get<int>();
  if (j.contains("loadings")) {
    fm.loadings = j.at("loadings").get<std::vector<std::vector<double>>>();
  }
  if (j.contains("mean")) fm.mean = j.at("mean").get<std::vector<double>>();
  if (j.contains("process")) fm.process = j.at("process").get<std::string>();
  if (j.contains("phi")) fm.phi = j.at("phi").get<double>();
  if (j.contains("loading_column_norm")) {
    fm.loading_column_norm = j.at("loading_column_norm").get<double>();
  }
  if (j.contains("outlier_margin")) fm.outlier_margin = j.at("outlier_margin").get<double>();
  return fm;
}

inline nlohmann::json factor_model_to_json(const FactorDemoConfig& fm) {
  nlohmann::json j;
  j["k"] = fm.k;
  if (fm.loadings) j["loadings"] = *fm.loadings;
  if (fm.mean) j["mean"] = *fm.mean;
  j["process"] = fm.process;
  if (fm.process == "ar1") j["phi"] = fm.phi;
  if (fm.loading_column_norm) j["loading_column_norm"] = *fm.loading_column_norm;
  j["outlier_margin"] = fm.outlier_margin;
  return j;
}

}  // namespace detail

/// Parses an ExperimentConfig from JSON; unknown keys are rejected.
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  static const std::set<std::string> kAllowed = {
      "experiment", "n",           "y_values",   "tau",  "distribution", "replications",
      "master_seed", "centered",   "output_dir", "bins", "p_values",     "factor_model"};
  if (!j.is_object()) throw config_error("config root must be a JSON object");
  detail::reject_unknown_keys(j, kAllowed, "config");

  ExperimentConfig cfg;
  try {
    if (j.contains("experiment")) {
      cfg.experiment = experiment_kind_from_string(j.at("experiment").get<std::string>());
    }
    if (j.contains("n")) cfg.n = j.at("n").get<int>();
    if (j.contains("y_values")) cfg.y_values = j.at("y_values").get<std::vector<double>>();
    if (j.contains("tau")) cfg.tau = j.at("tau").get<int>();
    if (j.contains("distribution")) {
      cfg.distribution = detail::distribution_from_json(j.at("distribution"));
    }
    if (j.contains("replications")) cfg.replications = j.at("replications").get<int>();
    if (j.contains("master_seed")) cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("centered")) cfg.centered = j.at("centered").get<bool>();
    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("bins")) cfg.bins = j.at("bins").get<int>();
    if (j.contains("p_values")) cfg.p_values = j.at("p_values").get<std::vector<int>>();
    if (j.contains("factor_model")) {
      cfg.factor_model = detail::factor_model_from_json(j.at("factor_model"));
    }
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("config parse error: ") + e.what());
  }
  return cfg;
}

/// Full resolved config echo for provenance in every summary.json.
inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["experiment"] = to_string(cfg.experiment);
  j["n"] = cfg.n;
  j["y_values"] = cfg.y_values;
  j["tau"] = cfg.tau;
  j["distribution"] = detail::distribution_to_json(cfg.distribution);
  j["replications"] = cfg.replications;
  j["master_seed"] = cfg.master_seed;
  j["centered"] = cfg.centered;
  j["output_dir"] = cfg.output_dir;
  j["bins"] = cfg.bins;
  if (!cfg.p_values.empty()) j["p_values"] = cfg.p_values;
  if (cfg.factor_model) j["factor_model"] = detail::factor_model_to_json(*cfg.factor_model);
  return j;
}

}  // namespace spectra
