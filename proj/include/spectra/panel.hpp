#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "spectra/rng.hpp"

namespace spectra {

/// An (n + tau_max) x p panel of i.i.d. standardized noise, generated
/// deterministically from a seed. The extra tau_max rows let lagged
/// constructions use genuine shifted windows without wraparound.
struct ErrorPanel {
  Eigen::MatrixXd data;  // (n + tau_max) x p
  int n = 0;             // nominal sample size
  int tau_max = 0;
  std::uint64_t seed = 0;

  int rows() const { return static_cast<int>(data.rows()); }
  int cols() const { return static_cast<int>(data.cols()); }
};

/// Draws an (n + tau_max) x p panel from `spec`, entry order row-major.
/// Identical arguments reproduce identical bits.
inline ErrorPanel sample_error_panel(const DistributionSpec& spec, int n, int p,
                                     int tau_max, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sample_error_panel: n must be >= 2");
  if (p < 1) throw std::invalid_argument("sample_error_panel: p must be >= 1");
  if (tau_max < 0) throw std::invalid_argument("sample_error_panel: tau_max must be >= 0");

  ErrorPanel panel;
  panel.n = n;
  panel.tau_max = tau_max;
  panel.seed = seed;
  panel.data.resize(n + tau_max, p);

  ScalarSampler sampler(spec, seed);
  for (int i = 0; i < n + tau_max; ++i) {
    for (int j = 0; j < p; ++j) {
      panel.data(i, j) = sampler.next();
    }
  }
  return panel;
}

/// Latent factor dynamics for the demonstration generator.
enum class FactorProcess { IidNormal, Ar1 };

/// y_i = mean + loadings * f_i + eps_i. The observation dimension is
/// loadings.rows(); k = 0 (a p x 0 loadings matrix) degenerates to pure noise.
struct FactorModelConfig {
  Eigen::MatrixXd loadings;          // p x k
  Eigen::VectorXd mean;              // p, or empty for zero
  FactorProcess process = FactorProcess::IidNormal;
  double ar1_phi = 0.0;              // in (-1, 1), Ar1 only

  int k() const { return static_cast<int>(loadings.cols()); }
  int p() const { return static_cast<int>(loadings.rows()); }

  void validate() const {
    if (p() < 1) throw std::invalid_argument("FactorModelConfig: loadings must have p >= 1 rows");
    if (mean.size() != 0 && mean.size() != loadings.rows()) {
      throw std::invalid_argument("FactorModelConfig: mean length does not match loadings rows");
    }
    if (process == FactorProcess::Ar1 && !(std::abs(ar1_phi) < 1.0)) {
      throw std::invalid_argument("FactorModelConfig: AR(1) coefficient must lie in (-1, 1)");
    }
    // An identically zero loadings matrix is a vacuous factor term and is
    // accepted as equivalent to k = 0; only non-zero rank-deficient loadings
    // signal an actual configuration mistake.
    if (k() >= 1 && loadings.array().abs().maxCoeff() > 0.0) {
      // Full column rank: smallest singular value above 1e-10 * largest.
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(loadings);
      const auto& sv = svd.singularValues();
      if (sv(0) <= 0.0 || sv(sv.size() - 1) <= 1e-10 * sv(0)) {
        throw std::invalid_argument("FactorModelConfig: loadings are column-rank deficient");
      }
    }
  }
};

namespace detail {

/// Stationary latent factor path, (n + tau_max) x k, unit marginal variance.
inline Eigen::MatrixXd sample_factor_path(const FactorModelConfig& cfg, int rows,
                                          std::uint64_t seed) {
  const int k = cfg.k();
  Eigen::MatrixXd f(rows, k);
  ScalarSampler normal(DistributionSpec::standard_normal(), seed);
  if (cfg.process == FactorProcess::IidNormal) {
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < k; ++j) f(i, j) = normal.next_normal();
  } else {
    const double phi = cfg.ar1_phi;
    const double innov = std::sqrt(1.0 - phi * phi);
    for (int j = 0; j < k; ++j) f(0, j) = normal.next_normal();
    for (int i = 1; i < rows; ++i)
      for (int j = 0; j < k; ++j) f(i, j) = phi * f(i - 1, j) + innov * normal.next_normal();
  }
  return f;
}

}  // namespace detail

/// Observation panel y_i = mean + loadings * f_i + eps_i (rowwise).
/// The noise stream equals sample_error_panel(spec, n, p, tau_max, seed)
/// exactly; factors use a separate stream derived from the same seed, so
/// k = 0 with zero mean reproduces the pure error panel bit for bit.
inline ErrorPanel sample_factor_panel(const FactorModelConfig& cfg,
                                      const DistributionSpec& spec, int n, int tau_max,
                                      std::uint64_t seed) {
  cfg.validate();
  const int p = cfg.p();
  ErrorPanel panel = sample_error_panel(spec, n, p, tau_max, seed);
  if (cfg.k() >= 1) {
    const Eigen::MatrixXd f =
        detail::sample_factor_path(cfg, panel.rows(), detail::mix64(seed ^ detail::kFactorStreamTag));
    panel.data.noalias() += f * cfg.loadings.transpose();
  }
  if (cfg.mean.size() != 0) {
    panel.data.rowwise() += cfg.mean.transpose();
  }
  return panel;
}

}  // namespace spectra
