// Command-line front end for the spectral laboratory: reproduces the ESD,
// largest-eigenvalue, and law-comparison experiments, runs the factor demo,
// and tabulates the limit densities.
//
// Exit codes: 0 success, 2 config error, 3 numerical-consistency error,
// 4 I/O error.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spectra/spectra.hpp"

namespace {

struct CliOverrides {
  std::optional<int> n;
  std::vector<double> y;
  std::optional<int> tau;
  std::optional<int> reps;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> dist;
  std::optional<int> df;
  std::optional<std::string> out;
  std::optional<int> bins;
  std::optional<bool> centered;
  std::vector<int> p;
  int threads = 0;
};

void add_common_flags(CLI::App* cmd, std::string& config_path, CliOverrides& ov) {
  cmd->add_option("--config", config_path, "JSON config file (ExperimentConfig schema)");
  cmd->add_option("--n", ov.n, "sample size");
  cmd->add_option("--y", ov.y, "aspect ratio(s) p/n (repeatable)");
  cmd->add_option("--tau", ov.tau, "lag (>= 1)");
  cmd->add_option("--reps", ov.reps, "Monte Carlo replications");
  cmd->add_option("--seed", ov.seed, "master seed");
  cmd->add_option("--dist", ov.dist,
                  "noise law: normal | rademacher | uniform | student_t");
  cmd->add_option("--df", ov.df, "degrees of freedom for --dist student_t (>= 5)");
  cmd->add_option("--out", ov.out, "output directory");
  cmd->add_option("--bins", ov.bins, "histogram bins (>= 10)");
  cmd->add_flag("--centered,!--no-centered", ov.centered,
                "mean-centered circular construction (default) vs non-centered");
  cmd->add_option("--threads", ov.threads, "worker threads (0 = hardware)");
}

spectra::DistributionSpec parse_distribution(const std::string& name, std::optional<int> df) {
  if (name == "normal" || name == "standard_normal") {
    return spectra::DistributionSpec::standard_normal();
  }
  if (name == "rademacher") return spectra::DistributionSpec::rademacher();
  if (name == "uniform" || name == "centered_uniform") {
    return spectra::DistributionSpec::centered_uniform();
  }
  if (name == "student_t") {
    if (!df) throw spectra::config_error("--dist student_t requires --df");
    try {
      return spectra::DistributionSpec::student_t(*df);
    } catch (const std::invalid_argument& e) {
      throw spectra::config_error(e.what());
    }
  }
  throw spectra::config_error("unknown distribution '" + name + "'");
}

spectra::ExperimentConfig load_config(const std::string& config_path,
                                      spectra::ExperimentKind kind, const CliOverrides& ov) {
  spectra::ExperimentConfig cfg;
  cfg.experiment = kind;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw spectra::io_error("cannot open config file " + config_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw spectra::config_error(std::string("config is not valid JSON: ") + e.what());
    }
    cfg = spectra::config_from_json(j);
    if (j.contains("experiment") && cfg.experiment != kind) {
      throw spectra::config_error("config experiment '" + spectra::to_string(cfg.experiment) +
                                  "' does not match the invoked subcommand");
    }
    cfg.experiment = kind;
  }
  if (ov.n) cfg.n = *ov.n;
  if (!ov.y.empty()) cfg.y_values = ov.y;
  if (ov.tau) cfg.tau = *ov.tau;
  if (ov.reps) cfg.replications = *ov.reps;
  if (ov.seed) cfg.master_seed = *ov.seed;
  if (ov.dist) cfg.distribution = parse_distribution(*ov.dist, ov.df);
  if (ov.out) cfg.output_dir = *ov.out;
  if (ov.bins) cfg.bins = *ov.bins;
  if (ov.centered) cfg.centered = *ov.centered;
  if (!ov.p.empty()) cfg.p_values = ov.p;
  return cfg;
}

int run(int argc, char** argv) {
  CLI::App app{"spectral laboratory for lag-tau sample auto-correlation matrices"};
  app.require_subcommand(1);

  std::string config_path;
  CliOverrides ov;

  auto* esd = app.add_subcommand("esd", "eigenvalue histogram vs the limit density");
  add_common_flags(esd, config_path, ov);

  auto* lmax = app.add_subcommand("lambda-max", "largest-eigenvalue boxplots vs the edge");
  add_common_flags(lmax, config_path, ov);
  lmax->add_option("--p", ov.p, "dimension grid (repeatable); n rounds to p/y");

  auto* cmp = app.add_subcommand("compare-mp",
                                 "lag spectrum vs sample correlation spectrum and MP law");
  add_common_flags(cmp, config_path, ov);

  auto* demo = app.add_subcommand("factor-demo",
                                  "singular-value outliers under a factor model (demo)");
  add_common_flags(demo, config_path, ov);
  int demo_k = 0;
  std::string demo_process = "iid_normal";
  double demo_phi = 0.0;
  std::optional<double> demo_norm;
  double demo_margin = 0.5;
  demo->add_option("--k", demo_k, "number of factors (>= 0)");
  demo->add_option("--factor-process", demo_process, "iid_normal | ar1");
  demo->add_option("--phi", demo_phi, "AR(1) coefficient in (-1, 1)");
  demo->add_option("--loading-norm", demo_norm, "loading column norm (default sqrt(p))");
  demo->add_option("--margin", demo_margin, "outlier margin above sqrt(b) (default 0.5)");

  auto* dens = app.add_subcommand("density", "tabulate a limit density to CSV");
  double dens_y = 1.0;
  int dens_grid = 400;
  std::string dens_out = "density.csv";
  std::string dens_law = "lsd";
  dens->add_option("--y", dens_y, "aspect ratio")->required();
  dens->add_option("--grid", dens_grid, "number of grid points (default 400)");
  dens->add_option("--out", dens_out, "output CSV path");
  dens->add_option("--law", dens_law, "lsd (lag law) | mp (Marcenko-Pastur)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the error message
    return code == 0 ? 0 : 2;
  }

  if (dens->parsed()) {
    if (!(dens_y > 0.0)) throw spectra::config_error("--y must be > 0");
    if (dens_grid < 2) throw spectra::config_error("--grid must be >= 2");
    double lo = 0.0, hi = 0.0;
    std::function<double(double)> f;
    if (dens_law == "lsd") {
      spectra::LsdLaw law(dens_y);
      lo = law.lower_edge();
      hi = law.upper_edge();
      f = [dens_y](double u) { return spectra::lsd_density(u, dens_y); };
    } else if (dens_law == "mp") {
      spectra::MpLaw law(dens_y);
      lo = law.lower_edge();
      hi = law.upper_edge();
      f = [dens_y](double u) { return spectra::mp_density(u, dens_y); };
    } else {
      throw spectra::config_error("--law must be lsd or mp");
    }
    spectra::CsvWriter w(dens_out, {"u", "f"});
    for (int i = 0; i < dens_grid; ++i) {
      const double u = lo + (hi - lo) * (i + 0.5) / dens_grid;
      w.write_row({spectra::csv_double(u), spectra::csv_double(f(u))});
    }
    std::cout << "wrote " << dens_out << "\n";
    return 0;
  }

  if (esd->parsed()) {
    const auto cfg = load_config(config_path, spectra::ExperimentKind::Esd, ov);
    const auto result = spectra::run_esd_experiment(cfg, ov.threads);
    for (const auto& yr : result.per_y) {
      std::cout << "y=" << yr.y << " p=" << yr.p << " KS(ESD, limit)=" << yr.ks_to_lsd
                << " zeros=" << yr.zero_count << " -> " << yr.dir.string() << "\n";
    }
    return 0;
  }
  if (lmax->parsed()) {
    const auto cfg = load_config(config_path, spectra::ExperimentKind::LambdaMax, ov);
    const auto result = spectra::run_lambda_max_experiment(cfg, ov.threads);
    for (const auto& cell : result.cells) {
      std::cout << "y=" << cell.y << " p=" << cell.p << " median=" << cell.summary.median
                << " edge=" << cell.edge << "\n";
    }
    return 0;
  }
  if (cmp->parsed()) {
    const auto cfg = load_config(config_path, spectra::ExperimentKind::CompareMp, ov);
    const auto result = spectra::run_compare_mp_experiment(cfg, ov.threads);
    for (const auto& yr : result.per_y) {
      std::cout << "y=" << yr.y << " KS(corr, MP)=" << yr.ks_corr_vs_mp
                << " KS(lag, MP)=" << yr.ks_lag_vs_mp << "\n";
    }
    return 0;
  }
  if (demo->parsed()) {
    auto cfg = load_config(config_path, spectra::ExperimentKind::Custom, ov);
    if (!cfg.factor_model) cfg.factor_model = spectra::FactorDemoConfig{};
    auto& fm = *cfg.factor_model;
    if (demo->count("--k")) fm.k = demo_k;
    if (demo->count("--factor-process")) fm.process = demo_process;
    if (demo->count("--phi")) fm.phi = demo_phi;
    if (demo->count("--loading-norm")) fm.loading_column_norm = demo_norm;
    if (demo->count("--margin")) fm.outlier_margin = demo_margin;
    if (cfg.y_values.size() != 1) cfg.y_values = {cfg.y_values.front()};
    const auto result = spectra::run_factor_demo(cfg, ov.threads);
    std::cout << "p=" << result.p << " threshold=" << result.threshold
              << " outliers=" << result.outlier_count << "\n";
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const spectra::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const spectra::numeric_error& e) {
    std::cerr << "numerical-consistency error: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "numerical-consistency error: " << e.what() << "\n";
    return 3;
  } catch (const spectra::io_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 4;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
