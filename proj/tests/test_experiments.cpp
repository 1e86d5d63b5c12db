#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "spectra/config.hpp"
#include "spectra/csv.hpp"
#include "spectra/experiments.hpp"

using namespace spectra;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "spectra_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config json: round trip and defaults") {
  const auto j = nlohmann::json::parse(R"({
    "experiment": "esd",
    "n": 100,
    "y_values": [0.5, 1.0],
    "tau": 2,
    "distribution": {"kind": "student_t", "df": 6},
    "replications": 3,
    "master_seed": 99,
    "centered": false,
    "output_dir": "somewhere",
    "bins": 24
  })");
  const ExperimentConfig cfg = config_from_json(j);
  CHECK(cfg.n == 100);
  CHECK(cfg.tau == 2);
  CHECK(cfg.distribution.kind == DistributionSpec::Kind::StudentT);
  CHECK(cfg.distribution.df == 6);
  CHECK(cfg.replications == 3);
  CHECK(cfg.master_seed == 99);
  CHECK_FALSE(cfg.centered);
  CHECK(cfg.bins == 24);
  CHECK_NOTHROW(cfg.validate());

  const nlohmann::json echo = config_to_json(cfg);
  const ExperimentConfig cfg2 = config_from_json(echo);
  CHECK(cfg2.n == cfg.n);
  CHECK(cfg2.distribution == cfg.distribution);
}

TEST_CASE("config json: unknown keys are rejected everywhere") {
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"nn": 12})")), config_error);
  CHECK_THROWS_AS(
      config_from_json(nlohmann::json::parse(R"({"distribution": {"kind": "normal!"}})")),
      config_error);
  CHECK_THROWS_AS(
      config_from_json(nlohmann::json::parse(R"({"distribution": {"kind": "rademacher", "x": 1}})")),
      config_error);
  CHECK_THROWS_AS(
      config_from_json(nlohmann::json::parse(
          R"({"experiment": "custom", "factor_model": {"k": 1, "zzz": true}})")),
      config_error);
}

TEST_CASE("config validation catches the documented degenerate cases") {
  ExperimentConfig cfg;
  cfg.tau = 0;  // the lag-0 baseline is built into compare_mp, never configured
  CHECK_THROWS_AS(cfg.validate(), config_error);

  cfg = {};
  cfg.bins = 9;
  CHECK_THROWS_AS(cfg.validate(), config_error);

  cfg = {};
  cfg.replications = 0;
  CHECK_THROWS_AS(cfg.validate(), config_error);

  cfg = {};
  cfg.y_values = {0.0001};  // round(y*n) == 0
  cfg.n = 100;
  CHECK_THROWS_AS(cfg.validate(), config_error);

  cfg = {};
  cfg.p_values = {100};  // only lambda_max takes a p grid
  CHECK_THROWS_AS(cfg.validate(), config_error);

  cfg = {};
  cfg.experiment = ExperimentKind::Custom;  // factor demo needs factor_model
  cfg.y_values = {1.0};
  CHECK_THROWS_AS(cfg.validate(), config_error);

  CHECK_THROWS_AS(
      config_from_json(nlohmann::json::parse(R"({"distribution": {"kind": "student_t", "df": 3}})")),
      config_error);
}

TEST_CASE("esd experiment: deterministic byte-identical reruns") {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::Esd;
  cfg.n = 60;
  cfg.y_values = {0.75};
  cfg.replications = 2;
  cfg.master_seed = 4242;
  cfg.bins = 12;

  const fs::path dir_a = fresh_dir("esd_a");
  const fs::path dir_b = fresh_dir("esd_b");
  cfg.output_dir = dir_a.string();
  run_esd_experiment(cfg, 2);
  cfg.output_dir = dir_b.string();
  run_esd_experiment(cfg, 1);  // different worker count on purpose

  for (const char* name :
       {"eigenvalues.csv", "histogram.csv", "density.csv", "overlay.svg", "summary.json"}) {
    INFO(name);
    const std::string a = slurp(dir_a / "y_0.75" / name);
    std::string b = slurp(dir_b / "y_0.75" / name);
    // summary.json echoes output_dir; normalize that one field.
    if (std::string(name) == "summary.json") {
      const auto ja = nlohmann::json::parse(a);
      auto jb = nlohmann::json::parse(b);
      jb["config"]["output_dir"] = ja["config"]["output_dir"];
      CHECK(ja == jb);
    } else {
      CHECK(a == b);
    }
  }
}

TEST_CASE("esd experiment: rank bound shows up in eigenvalues.csv") {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::Esd;
  cfg.n = 200;
  cfg.y_values = {2.0};
  cfg.replications = 1;
  cfg.centered = false;
  const fs::path dir = fresh_dir("esd_rank");
  cfg.output_dir = dir.string();
  const EsdResult res = run_esd_experiment(cfg);
  REQUIRE(res.per_y.size() == 1);
  CHECK(res.per_y[0].p == 400);

  std::ifstream in(dir / "y_2" / "eigenvalues.csv");
  REQUIRE(in);
  std::string line;
  std::getline(in, line);  // header
  int below = 0, total = 0;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    const double v = std::stod(line.substr(comma + 1));
    ++total;
    if (v < 1e-8) ++below;
  }
  CHECK(total == 400);
  CHECK(below >= 200);
  CHECK(res.per_y[0].zero_count >= 200);
}

TEST_CASE("lambda-max experiment: grid, reference edge, thread invariance") {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::LambdaMax;
  cfg.y_values = {1.0};
  cfg.p_values = {40, 80};
  cfg.replications = 6;
  cfg.master_seed = 777;

  const fs::path dir_a = fresh_dir("lmax_a");
  cfg.output_dir = dir_a.string();
  const LambdaMaxResult res = run_lambda_max_experiment(cfg, 2);
  REQUIRE(res.cells.size() == 2);
  CHECK(res.cells[0].edge == 6.75);  // exact at y=1
  CHECK(res.cells[0].p == 40);
  CHECK(res.cells[1].n_eff == 80);
  for (const auto& cell : res.cells) {
    CHECK(cell.summary.lambda_max.size() == 6);
    CHECK(cell.summary.min <= cell.summary.median);
    CHECK(cell.summary.median <= cell.summary.max);
  }

  const fs::path dir_b = fresh_dir("lmax_b");
  cfg.output_dir = dir_b.string();
  run_lambda_max_experiment(cfg, 1);
  CHECK(slurp(dir_a / "lambda_max.csv") == slurp(dir_b / "lambda_max.csv"));
}

TEST_CASE("compare-mp experiment runs and emits both spectra") {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::CompareMp;
  cfg.n = 120;
  cfg.y_values = {1.0};
  cfg.replications = 1;
  const fs::path dir = fresh_dir("cmp");
  cfg.output_dir = dir.string();
  const CompareMpResult res = run_compare_mp_experiment(cfg);
  REQUIRE(res.per_y.size() == 1);
  // Finite-size sanity only; the paper-scale bands live in the acceptance suite.
  CHECK(res.per_y[0].ks_corr_vs_mp < 0.2);
  CHECK(res.per_y[0].ks_lag_vs_mp > res.per_y[0].ks_corr_vs_mp);
  CHECK(fs::exists(dir / "y_1" / "eigenvalues_lag.csv"));
  CHECK(fs::exists(dir / "y_1" / "eigenvalues_corr.csv"));
  CHECK(fs::exists(dir / "y_1" / "density_lsd.csv"));
  CHECK(fs::exists(dir / "y_1" / "density_mp.csv"));
  CHECK(fs::exists(dir / "y_1" / "overlay.svg"));
}

TEST_CASE("factor demo: null case, zero loadings, spiked case") {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::Custom;
  cfg.n = 500;
  cfg.y_values = {1.0};
  cfg.replications = 1;
  cfg.master_seed = 31415;
  cfg.factor_model = FactorDemoConfig{};
  cfg.factor_model->k = 0;

  const fs::path dir = fresh_dir("demo_null");
  cfg.output_dir = dir.string();
  const FactorDemoResult null_res = run_factor_demo(cfg);
  CHECK(null_res.outlier_count == 0);
  CHECK(null_res.threshold == Catch::Approx(std::sqrt(6.75) + 0.5));

  // Explicit all-zero loadings behave exactly like k = 0.
  ExperimentConfig zero_cfg = cfg;
  zero_cfg.factor_model->k = 2;
  zero_cfg.factor_model->loadings =
      std::vector<std::vector<double>>(500, std::vector<double>(2, 0.0));
  zero_cfg.output_dir = fresh_dir("demo_zero").string();
  const FactorDemoResult zero_res = run_factor_demo(zero_cfg);
  CHECK(zero_res.outlier_count == 0);
  REQUIRE(zero_res.singular_values[0].size() == null_res.singular_values[0].size());
  for (std::size_t i = 0; i < zero_res.singular_values[0].size(); ++i) {
    CHECK(zero_res.singular_values[0][i] == null_res.singular_values[0][i]);
  }

  // Three strong AR(1) factors push three singular values past the bulk.
  ExperimentConfig spiked = cfg;
  spiked.factor_model->k = 3;
  spiked.factor_model->process = "ar1";
  spiked.factor_model->phi = 0.5;
  spiked.output_dir = fresh_dir("demo_spiked").string();
  const FactorDemoResult spiked_res = run_factor_demo(spiked);
  CHECK(spiked_res.outlier_count >= 3);
}

TEST_CASE("csv formatting: 17 significant digits, LF endings") {
  const fs::path dir = fresh_dir("csv");
  const fs::path file = dir / "t.csv";
  {
    CsvWriter w(file, {"a", "b"});
    w.write_row({csv_double(1.0 / 3.0), csv_double(6.75)});
  }
  const std::string text = slurp(file);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text == "a,b\n0.33333333333333331,6.75\n");
  CHECK(std::stod("0.33333333333333331") == 1.0 / 3.0);  // lossless round trip
}

TEST_CASE("matrix csv export is row-major with 17 digits") {
  const fs::path dir = fresh_dir("csv_matrix");
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 2.5, -3.0 / 7.0, 4.0;
  write_matrix_csv(dir / "m.csv", m);
  const std::string text = slurp(dir / "m.csv");
  CHECK(text == "c0,c1\n1,2.5\n-0.42857142857142855,4\n");
}
