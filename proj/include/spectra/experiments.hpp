#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

#include <json.hpp>

#include "spectra/config.hpp"
#include "spectra/csv.hpp"
#include "spectra/ecdf.hpp"
#include "spectra/errors.hpp"
#include "spectra/lag_matrix.hpp"
#include "spectra/limit_law.hpp"
#include "spectra/panel.hpp"
#include "spectra/spectrum.hpp"
#include "spectra/svg.hpp"

namespace spectra {

namespace detail {

inline constexpr std::uint64_t kLoadingStreamTag = 0x7be4c1a95d20f863ULL;

/// Work-stealing replication loop: workers pull indices from a shared
/// counter, results are keyed by index, so the aggregate is independent of
/// the worker count and of scheduling order.
template <class Fn>
void parallel_for_index(int count, int threads, Fn&& fn) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

inline std::filesystem::path make_output_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw io_error("cannot create output directory " + dir.string());
  return dir;
}

inline std::string y_tag(double y) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "y_%g", y);
  return buf;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw io_error("write failure on " + path.string());
}

/// Per-task, per-replication seed chain rooted at the master seed.
inline std::uint64_t chain_seed(std::uint64_t master, int task, int rep) {
  return derive_replication_seed(derive_replication_seed(master, task), rep);
}

/// Snaps near-zero eigenvalues of a PSD spectrum to exactly zero
/// (relative threshold 1e-8 against the largest eigenvalue).
inline void snap_zeros(Spectrum& s, double threshold = 1e-8) {
  const double cut = threshold * std::max(s.max(), 0.0);
  for (double& v : s.values) {
    if (v < cut) v = 0.0;
  }
}

}  // namespace detail

/// Density-scale histogram. Counts are divided by total * binwidth where
/// `total` includes any excluded zero atom, so the bars are comparable to the
/// continuous density of the limit law.
struct Histogram {
  std::vector<double> edges;    // bins + 1 ascending
  std::vector<double> density;  // bins
  int excluded_zeros = 0;
  int total = 0;
};

inline Histogram make_histogram(const std::vector<double>& values, int bins, double lo,
                                double hi, bool exclude_zero_atom) {
  Histogram h;
  h.total = static_cast<int>(values.size());
  h.edges.resize(bins + 1);
  for (int i = 0; i <= bins; ++i) h.edges[i] = lo + (hi - lo) * i / bins;
  std::vector<int> counts(bins, 0);
  for (double v : values) {
    if (exclude_zero_atom && v == 0.0) {
      ++h.excluded_zeros;
      continue;
    }
    if (v < lo || v > hi) continue;
    int bin = static_cast<int>((v - lo) / (hi - lo) * bins);
    bin = std::clamp(bin, 0, bins - 1);
    ++counts[bin];
  }
  const double width = (hi - lo) / bins;
  h.density.resize(bins);
  for (int i = 0; i < bins; ++i) {
    h.density[i] = counts[i] / (static_cast<double>(h.total) * width);
  }
  return h;
}

// ---------------------------------------------------------------------------
// ESD experiment: empirical spectrum of the symmetrized lag-tau
// auto-correlation matrix against the closed-form limit density, one
// artifact set per aspect ratio.
// ---------------------------------------------------------------------------

struct EsdYResult {
  double y = 0.0;
  int p = 0;
  double ks_to_lsd = 0.0;
  int zero_count = 0;
  std::vector<double> eigenvalues;  // pooled over replications, per-rep ascending
  std::filesystem::path dir;
};

struct EsdResult {
  std::vector<EsdYResult> per_y;
};

namespace detail {

inline Spectrum lag_autocorr_sym_spectrum(const ExperimentConfig& cfg, int n_eff, int p,
                                          std::uint64_t seed) {
  const ErrorPanel panel =
      sample_error_panel(cfg.distribution, n_eff, p, cfg.centered ? 0 : cfg.tau, seed);
  const LagMatrix r = autocorr(panel, cfg.tau, cfg.centered);
  return sym_product_spectrum(sym_product(r));
}

inline void write_density_csv(const std::filesystem::path& path, double lo, double hi,
                              int points, const std::function<double(double)>& f) {
  CsvWriter w(path, {"u", "f"});
  for (int i = 0; i < points; ++i) {
    const double u = lo + (hi - lo) * (i + 0.5) / points;
    w.write_row({csv_double(u), csv_double(f(u))});
  }
}

}  // namespace detail

inline EsdResult run_esd_experiment(const ExperimentConfig& cfg, int threads = 0) {
  cfg.validate();
  if (cfg.experiment != ExperimentKind::Esd) {
    throw config_error("run_esd_experiment requires experiment=esd");
  }
  EsdResult result;
  const auto root = detail::make_output_dir(cfg.output_dir);

  for (std::size_t iy = 0; iy < cfg.y_values.size(); ++iy) {
    const double y = cfg.y_values[iy];
    const int p = cfg.p_for(y);
    std::vector<std::vector<double>> per_rep(cfg.replications);
    detail::parallel_for_index(cfg.replications, threads, [&](int rep) {
      const Spectrum s = detail::lag_autocorr_sym_spectrum(
          cfg, cfg.n, p, detail::chain_seed(cfg.master_seed, static_cast<int>(iy), rep));
      per_rep[rep] = s.values;
    });

    EsdYResult yr;
    yr.y = y;
    yr.p = p;
    yr.dir = detail::make_output_dir(root / detail::y_tag(y));
    for (const auto& v : per_rep) {
      yr.eigenvalues.insert(yr.eigenvalues.end(), v.begin(), v.end());
    }
    yr.zero_count = static_cast<int>(
        std::count(yr.eigenvalues.begin(), yr.eigenvalues.end(), 0.0));

    const LsdLaw law(y);
    const Ecdf empirical{yr.eigenvalues};
    yr.ks_to_lsd = ks_distance(empirical, law);

    {
      CsvWriter w(yr.dir / "eigenvalues.csv", {"rep", "eigenvalue"});
      for (int rep = 0; rep < cfg.replications; ++rep) {
        for (double v : per_rep[rep]) w.write_row({std::to_string(rep), csv_double(v)});
      }
    }
    const double hist_hi = std::max(law.upper_edge(),
                                    *std::max_element(yr.eigenvalues.begin(),
                                                      yr.eigenvalues.end()));
    const Histogram hist =
        make_histogram(yr.eigenvalues, cfg.bins, 0.0, hist_hi, /*exclude_zero_atom=*/y > 1.0);
    {
      CsvWriter w(yr.dir / "histogram.csv", {"bin_lo", "bin_hi", "density"});
      for (int i = 0; i < cfg.bins; ++i) {
        w.write_row({csv_double(hist.edges[i]), csv_double(hist.edges[i + 1]),
                     csv_double(hist.density[i])});
      }
    }
    detail::write_density_csv(yr.dir / "density.csv", law.lower_edge(), law.upper_edge(), 400,
                              [&](double u) { return law.density(u); });

    {
      double peak = 0.0;
      for (double d : hist.density) peak = std::max(peak, d);
      std::vector<double> grid_u, grid_f;
      for (int i = 0; i < 400; ++i) {
        const double u =
            law.lower_edge() + (law.upper_edge() - law.lower_edge()) * (i + 0.5) / 400.0;
        grid_u.push_back(u);
        grid_f.push_back(law.density(u));
        peak = std::max(peak, grid_f.back());
      }
      SvgCanvas svg(0.0, hist_hi, 0.0, peak * 1.08);
      svg.add_title("lag-" + std::to_string(cfg.tau) + " auto-correlation spectrum, y=" +
                    detail::y_tag(y).substr(2) + ", p=" + std::to_string(p));
      for (int i = 0; i < cfg.bins; ++i) {
        svg.add_hist_bar(hist.edges[i], hist.edges[i + 1], hist.density[i], "#9ecae1", 0.85);
      }
      svg.add_polyline(grid_u, grid_f, "#d62728", 1.8);
      svg.add_axes();
      svg.write(yr.dir / "overlay.svg");
    }

    nlohmann::json summary;
    summary["config"] = config_to_json(cfg);
    summary["y"] = y;
    summary["p"] = p;
    summary["ks_to_limit_cdf"] = yr.ks_to_lsd;
    summary["zero_eigenvalues"] = yr.zero_count;
    summary["eigenvalue_count"] = yr.eigenvalues.size();
    summary["support_edges"] = {law.lower_edge(), law.upper_edge()};
    summary["point_mass_at_zero"] = law.point_mass_at(0.0);
    detail::write_json(yr.dir / "summary.json", summary);

    result.per_y.push_back(std::move(yr));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Largest-eigenvalue experiment: boxplot statistics of lambda_max over
// replications on a (y, p) grid, against the right support edge b(y).
// ---------------------------------------------------------------------------

struct LambdaMaxCell {
  double y = 0.0;
  int p = 0;
  int n_eff = 0;
  double edge = 0.0;                // b(y)
  EigenvalueSummary summary;
};

struct LambdaMaxResult {
  std::vector<LambdaMaxCell> cells;
};

inline LambdaMaxResult run_lambda_max_experiment(const ExperimentConfig& cfg, int threads = 0) {
  cfg.validate();
  if (cfg.experiment != ExperimentKind::LambdaMax) {
    throw config_error("run_lambda_max_experiment requires experiment=lambda_max");
  }
  const auto root = detail::make_output_dir(cfg.output_dir);

  struct CellSpec {
    double y;
    int p;
    int n_eff;
  };
  std::vector<CellSpec> grid;
  for (double y : cfg.y_values) {
    if (cfg.p_values.empty()) {
      grid.push_back({y, cfg.p_for(y), cfg.n});
    } else {
      for (int p : cfg.p_values) {
        const int n_eff = static_cast<int>(std::lround(p / y));
        if (n_eff < 2) throw config_error("p/y grid gives a sample size below 2");
        if (n_eff <= cfg.tau) throw config_error("p/y grid gives a sample size <= tau");
        grid.push_back({y, p, n_eff});
      }
    }
  }

  LambdaMaxResult result;
  for (std::size_t task = 0; task < grid.size(); ++task) {
    const auto [y, p, n_eff] = grid[task];
    std::vector<Spectrum> spectra(cfg.replications);
    detail::parallel_for_index(cfg.replications, threads, [&](int rep) {
      spectra[rep] = detail::lag_autocorr_sym_spectrum(
          cfg, n_eff, p, detail::chain_seed(cfg.master_seed, static_cast<int>(task), rep));
    });
    LambdaMaxCell cell;
    cell.y = y;
    cell.p = p;
    cell.n_eff = n_eff;
    cell.edge = support_edges(y).second;
    cell.summary = eigenvalue_summary(spectra);
    result.cells.push_back(std::move(cell));
  }

  {
    CsvWriter w(root / "lambda_max.csv", {"y", "p", "rep", "lambda_max"});
    for (const auto& cell : result.cells) {
      for (std::size_t rep = 0; rep < cell.summary.lambda_max.size(); ++rep) {
        w.write_row({csv_double(cell.y), std::to_string(cell.p), std::to_string(rep),
                     csv_double(cell.summary.lambda_max[rep])});
      }
    }
  }

  nlohmann::json box;
  box["config"] = config_to_json(cfg);
  box["cells"] = nlohmann::json::array();
  for (const auto& cell : result.cells) {
    nlohmann::json c;
    c["y"] = cell.y;
    c["p"] = cell.p;
    c["n"] = cell.n_eff;
    c["edge"] = cell.edge;
    c["median"] = cell.summary.median;
    c["q1"] = cell.summary.q1;
    c["q3"] = cell.summary.q3;
    c["min"] = cell.summary.min;
    c["max"] = cell.summary.max;
    box["cells"].push_back(c);
  }
  detail::write_json(root / "boxstats.json", box);

  {
    double v_lo = std::numeric_limits<double>::infinity(), v_hi = 0.0;
    for (const auto& cell : result.cells) {
      v_lo = std::min({v_lo, cell.summary.min, cell.edge});
      v_hi = std::max({v_hi, cell.summary.max, cell.edge});
    }
    const double pad = 0.06 * (v_hi - v_lo + 1e-9);
    SvgCanvas svg(0.0, static_cast<double>(result.cells.size()), v_lo - pad, v_hi + pad);
    svg.add_title("largest eigenvalue vs right support edge");
    std::vector<double> edges_seen;
    for (std::size_t i = 0; i < result.cells.size(); ++i) {
      const auto& cell = result.cells[i];
      const auto& s = cell.summary;
      svg.add_box(i + 0.5, 0.18, s.min, s.q1, s.median, s.q3, s.max, "#1f77b4");
      svg.add_label(i + 0.5, v_lo - pad / 2,
                    "p=" + std::to_string(cell.p) + " " + detail::y_tag(cell.y));
      if (std::find(edges_seen.begin(), edges_seen.end(), cell.edge) == edges_seen.end()) {
        svg.add_hline(cell.edge, "#d62728");
        edges_seen.push_back(cell.edge);
      }
    }
    svg.add_axes(static_cast<int>(result.cells.size()), 5);
    svg.write(root / "boxplot.svg");
  }
  return result;
}

// ---------------------------------------------------------------------------
// Comparison experiment: spectrum of the symmetrized lag-tau auto-correlation
// matrix versus the plain (lag-0) sample correlation matrix, against both the
// closed-form limit law and the Marcenko-Pastur law.
// ---------------------------------------------------------------------------

struct CompareMpYResult {
  double y = 0.0;
  int p = 0;
  double ks_corr_vs_mp = 0.0;   // ESD of the lag-0 correlation matrix vs MP
  double ks_lag_vs_mp = 0.0;    // ESD of the symmetrized lag matrix vs MP
  double ks_lag_vs_lsd = 0.0;   // same ESD vs its own limit law
  std::filesystem::path dir;
};

struct CompareMpResult {
  std::vector<CompareMpYResult> per_y;
};

inline CompareMpResult run_compare_mp_experiment(const ExperimentConfig& cfg, int threads = 0) {
  cfg.validate();
  if (cfg.experiment != ExperimentKind::CompareMp) {
    throw config_error("run_compare_mp_experiment requires experiment=compare_mp");
  }
  CompareMpResult result;
  const auto root = detail::make_output_dir(cfg.output_dir);

  for (std::size_t iy = 0; iy < cfg.y_values.size(); ++iy) {
    const double y = cfg.y_values[iy];
    const int p = cfg.p_for(y);
    std::vector<std::vector<double>> lag_vals(cfg.replications);
    std::vector<std::vector<double>> corr_vals(cfg.replications);
    detail::parallel_for_index(cfg.replications, threads, [&](int rep) {
      const std::uint64_t seed =
          detail::chain_seed(cfg.master_seed, static_cast<int>(iy), rep);
      const ErrorPanel panel =
          sample_error_panel(cfg.distribution, cfg.n, p, cfg.centered ? 0 : cfg.tau, seed);
      const LagMatrix r_tau = autocorr(panel, cfg.tau, cfg.centered);
      Spectrum lag_spec = sym_product_spectrum(sym_product(r_tau));
      lag_vals[rep] = std::move(lag_spec.values);
      // The lag-0 matrix is symmetric; its eigenvalues are used directly.
      const LagMatrix r0 = autocorr(panel, 0, cfg.centered);
      Spectrum corr_spec = sym_eigenvalues(r0.data);
      detail::snap_zeros(corr_spec);
      corr_vals[rep] = std::move(corr_spec.values);
    });

    CompareMpYResult yr;
    yr.y = y;
    yr.p = p;
    yr.dir = detail::make_output_dir(root / detail::y_tag(y));

    std::vector<double> lag_all, corr_all;
    for (int rep = 0; rep < cfg.replications; ++rep) {
      lag_all.insert(lag_all.end(), lag_vals[rep].begin(), lag_vals[rep].end());
      corr_all.insert(corr_all.end(), corr_vals[rep].begin(), corr_vals[rep].end());
    }
    const MpLaw mp(y);
    const LsdLaw lsd(y);
    const Ecdf lag_ecdf{lag_all};
    const Ecdf corr_ecdf{corr_all};
    yr.ks_corr_vs_mp = ks_distance(corr_ecdf, mp);
    yr.ks_lag_vs_mp = ks_distance(lag_ecdf, mp);
    yr.ks_lag_vs_lsd = ks_distance(lag_ecdf, lsd);

    {
      CsvWriter w(yr.dir / "eigenvalues_lag.csv", {"rep", "eigenvalue"});
      for (int rep = 0; rep < cfg.replications; ++rep)
        for (double v : lag_vals[rep]) w.write_row({std::to_string(rep), csv_double(v)});
    }
    {
      CsvWriter w(yr.dir / "eigenvalues_corr.csv", {"rep", "eigenvalue"});
      for (int rep = 0; rep < cfg.replications; ++rep)
        for (double v : corr_vals[rep]) w.write_row({std::to_string(rep), csv_double(v)});
    }
    detail::write_density_csv(yr.dir / "density_lsd.csv", lsd.lower_edge(), lsd.upper_edge(),
                              400, [&](double u) { return lsd.density(u); });
    detail::write_density_csv(yr.dir / "density_mp.csv", mp.lower_edge(), mp.upper_edge(), 400,
                              [&](double u) { return mp.density(u); });

    {
      const double hi = std::max({lsd.upper_edge(), mp.upper_edge(),
                                  *std::max_element(lag_all.begin(), lag_all.end()),
                                  *std::max_element(corr_all.begin(), corr_all.end())});
      const Histogram lag_hist = make_histogram(lag_all, cfg.bins, 0.0, hi, y > 1.0);
      const Histogram corr_hist = make_histogram(corr_all, cfg.bins, 0.0, hi, y > 1.0);
      double peak = 0.0;
      for (double d : lag_hist.density) peak = std::max(peak, d);
      for (double d : corr_hist.density) peak = std::max(peak, d);
      std::vector<double> ul, fl, um, fm;
      for (int i = 0; i < 400; ++i) {
        const double a = lsd.lower_edge() + (lsd.upper_edge() - lsd.lower_edge()) * (i + 0.5) / 400.0;
        ul.push_back(a);
        fl.push_back(lsd.density(a));
        const double b = mp.lower_edge() + (mp.upper_edge() - mp.lower_edge()) * (i + 0.5) / 400.0;
        um.push_back(b);
        fm.push_back(mp.density(b));
        peak = std::max({peak, fl.back(), fm.back()});
      }
      SvgCanvas svg(0.0, hi, 0.0, peak * 1.08);
      svg.add_title("lag spectrum (red) vs correlation spectrum (blue), " + detail::y_tag(y));
      for (int i = 0; i < cfg.bins; ++i) {
        svg.add_hist_bar(lag_hist.edges[i], lag_hist.edges[i + 1], lag_hist.density[i],
                         "#fcae91", 0.7);
        svg.add_hist_bar(corr_hist.edges[i], corr_hist.edges[i + 1], corr_hist.density[i],
                         "#9ecae1", 0.7);
      }
      svg.add_polyline(ul, fl, "#d62728", 1.8);
      svg.add_polyline(um, fm, "#1f77b4", 1.8);
      svg.add_axes();
      svg.write(yr.dir / "overlay.svg");
    }

    nlohmann::json summary;
    summary["config"] = config_to_json(cfg);
    summary["y"] = y;
    summary["p"] = p;
    summary["ks_corr_vs_mp"] = yr.ks_corr_vs_mp;
    summary["ks_lag_vs_mp"] = yr.ks_lag_vs_mp;
    summary["ks_lag_vs_lsd"] = yr.ks_lag_vs_lsd;
    detail::write_json(yr.dir / "summary.json", summary);

    result.per_y.push_back(std::move(yr));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Factor demo: singular values of the lag-tau auto-correlation matrix of a
// factor-model observation panel. Demonstration only: outlier counting here
// is a heuristic illustration, not a proven estimation rule.
// ---------------------------------------------------------------------------

struct FactorDemoResult {
  int p = 0;
  double threshold = 0.0;              // sqrt(b(y)) + margin
  std::vector<int> outliers_per_rep;
  int outlier_count = 0;               // median over replications
  std::vector<std::vector<double>> singular_values;  // per rep, descending
};

inline FactorDemoResult run_factor_demo(const ExperimentConfig& cfg, int threads = 0) {
  cfg.validate();
  if (cfg.experiment != ExperimentKind::Custom) {
    throw config_error("run_factor_demo requires experiment=custom with a factor_model");
  }
  const FactorDemoConfig& fm = *cfg.factor_model;
  const double y = cfg.y_values.front();
  const int p = cfg.p_for(y);
  const auto root = detail::make_output_dir(cfg.output_dir);

  FactorModelConfig model;
  model.process = fm.process == "ar1" ? FactorProcess::Ar1 : FactorProcess::IidNormal;
  model.ar1_phi = fm.phi;
  if (fm.loadings) {
    const auto& rows = *fm.loadings;
    if (static_cast<int>(rows.size()) != p) {
      throw config_error("factor_model.loadings must have round(y*n) rows");
    }
    model.loadings.resize(p, fm.k);
    for (int i = 0; i < p; ++i) {
      if (static_cast<int>(rows[i].size()) != fm.k) {
        throw config_error("factor_model.loadings rows must have k entries");
      }
      for (int j = 0; j < fm.k; ++j) model.loadings(i, j) = rows[i][j];
    }
  } else {
    // Deterministic Gaussian directions scaled to the requested column norm.
    model.loadings.resize(p, fm.k);
    ScalarSampler normal(DistributionSpec::standard_normal(),
                         detail::mix64(cfg.master_seed ^ detail::kLoadingStreamTag));
    for (int j = 0; j < fm.k; ++j) {
      for (int i = 0; i < p; ++i) model.loadings(i, j) = normal.next_normal();
    }
    const double target = fm.loading_column_norm.value_or(std::sqrt(static_cast<double>(p)));
    for (int j = 0; j < fm.k; ++j) {
      const double norm = model.loadings.col(j).norm();
      if (norm > 0.0) model.loadings.col(j) *= target / norm;
    }
  }
  if (fm.mean) {
    if (static_cast<int>(fm.mean->size()) != p) {
      throw config_error("factor_model.mean must have round(y*n) entries");
    }
    model.mean = Eigen::Map<const Eigen::VectorXd>(fm.mean->data(), p);
  }

  FactorDemoResult result;
  result.p = p;
  result.threshold = std::sqrt(support_edges(y).second) + fm.outlier_margin;
  result.singular_values.resize(cfg.replications);
  result.outliers_per_rep.resize(cfg.replications);

  detail::parallel_for_index(cfg.replications, threads, [&](int rep) {
    const ErrorPanel panel =
        sample_factor_panel(model, cfg.distribution, cfg.n, cfg.centered ? 0 : cfg.tau,
                            detail::chain_seed(cfg.master_seed, 0, rep));
    const LagMatrix r = autocorr(panel, cfg.tau, cfg.centered);
    Spectrum sv = singular_values(r.data);
    std::reverse(sv.values.begin(), sv.values.end());  // descending
    int count = 0;
    for (double v : sv.values) {
      if (v > result.threshold) ++count;
    }
    result.singular_values[rep] = std::move(sv.values);
    result.outliers_per_rep[rep] = count;
  });

  {
    std::vector<int> sorted = result.outliers_per_rep;
    std::sort(sorted.begin(), sorted.end());
    result.outlier_count = sorted[sorted.size() / 2];
  }

  {
    CsvWriter w(root / "singular_values.csv", {"rep", "rank", "singular_value"});
    for (int rep = 0; rep < cfg.replications; ++rep) {
      for (std::size_t i = 0; i < result.singular_values[rep].size(); ++i) {
        w.write_row({std::to_string(rep), std::to_string(i),
                     csv_double(result.singular_values[rep][i])});
      }
    }
  }
  nlohmann::json oc;
  oc["note"] = "demonstration only: outlier counting against sqrt(b)+margin is a "
               "heuristic illustration, not a proven estimation rule";
  oc["threshold"] = result.threshold;
  oc["margin"] = fm.outlier_margin;
  oc["bulk_edge_sqrt"] = std::sqrt(support_edges(y).second);
  oc["outliers_per_rep"] = result.outliers_per_rep;
  oc["outlier_count"] = result.outlier_count;
  detail::write_json(root / "outlier_count.json", oc);

  nlohmann::json summary;
  summary["config"] = config_to_json(cfg);
  summary["p"] = p;
  summary["threshold"] = result.threshold;
  summary["outlier_count"] = result.outlier_count;
  detail::write_json(root / "summary.json", summary);

  return result;
}

}  // namespace spectra
