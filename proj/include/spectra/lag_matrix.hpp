#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

#include "spectra/errors.hpp"
#include "spectra/panel.hpp"

namespace spectra {

/// A p x p lag-tau sample auto-covariance or auto-correlation matrix plus
/// its construction metadata.
///
/// Centered variant: (1/(n-1)) sum_{i=1..n} (y_i - ybar)(y_{i+tau} - ybar)^t
/// over the first n panel rows with circular indexing y_{n+i} = y_i.
/// Non-centered variant: (1/n) sum_{i=1..n} eps_i eps_{i+tau}^t over genuine
/// shifted rows (no wraparound), consuming n + tau panel rows.
struct LagMatrix {
  Eigen::MatrixXd data;  // p x p
  int lag = 0;
  bool centered = true;
  bool normalized = false;  // auto-correlation vs auto-covariance
  int n = 0;                // effective sample size
  double divisor = 0.0;     // n-1 centered, n non-centered

  int dim() const { return static_cast<int>(data.rows()); }
};

/// Symmetrized product A A^t of a lag matrix; positive semidefinite.
struct SymProduct {
  Eigen::MatrixXd data;  // p x p symmetric
  int source_lag = 0;

  int dim() const { return static_cast<int>(data.rows()); }
};

namespace detail {

inline void check_lag_args(const ErrorPanel& panel, int tau, bool centered) {
  if (panel.n < 2) throw std::invalid_argument("lag matrix: panel sample size must be >= 2");
  if (tau < 0) throw std::invalid_argument("lag matrix: tau must be >= 0");
  if (tau >= panel.n) {
    throw std::invalid_argument("lag matrix: tau >= n gives a degenerate window overlap");
  }
  if (!centered && panel.rows() < panel.n + tau) {
    throw std::invalid_argument(
        "lag matrix: non-centered construction needs n + tau rows; tau exceeds the "
        "panel's tau_max");
  }
}

/// Diagonal of the lag-0 matrix in the matching convention, without
/// forming the full p x p product. Returns raw column sums of squares,
/// i.e. divisor * diag(S_0).
inline Eigen::VectorXd lag0_sumsq(const ErrorPanel& panel, bool centered) {
  const int n = panel.n;
  const auto window = panel.data.topRows(n);
  if (centered) {
    const Eigen::RowVectorXd mean = window.colwise().mean();
    return (window.rowwise() - mean).colwise().squaredNorm();
  }
  return window.colwise().squaredNorm();
}

inline void validate_lag_matrix(const LagMatrix& m) {
  if (!m.data.allFinite()) {
    throw numeric_error("lag matrix: non-finite entries after construction");
  }
  if (m.normalized && m.lag == 0) {
    const double diag_err = (m.data.diagonal().array() - 1.0).abs().maxCoeff();
    if (diag_err > 1e-12) {
      throw numeric_error("lag-0 auto-correlation: diagonal deviates from 1 by " +
                          std::to_string(diag_err));
    }
    if (m.data.array().abs().maxCoeff() > 1.0 + 1e-12) {
      throw numeric_error("lag-0 auto-correlation: entry outside [-1, 1]");
    }
  }
}

}  // namespace detail

/// Lag-tau sample auto-covariance matrix of the panel.
inline LagMatrix autocov(const ErrorPanel& panel, int tau, bool centered) {
  detail::check_lag_args(panel, tau, centered);
  const int n = panel.n;
  const int p = panel.cols();

  LagMatrix out;
  out.lag = tau;
  out.centered = centered;
  out.normalized = false;
  out.n = n;
  out.divisor = centered ? static_cast<double>(n - 1) : static_cast<double>(n);

  if (centered) {
    const auto window = panel.data.topRows(n);
    const Eigen::RowVectorXd mean = window.colwise().mean();
    const Eigen::MatrixXd yc = window.rowwise() - mean;
    Eigen::MatrixXd shifted(n, p);
    shifted.topRows(n - tau) = yc.bottomRows(n - tau);  // rows tau..n-1
    shifted.bottomRows(tau) = yc.topRows(tau);          // circular wrap
    out.data.noalias() = yc.transpose() * shifted;
  } else {
    const auto lead = panel.data.topRows(n);
    const auto lagged = panel.data.middleRows(tau, n);
    out.data.noalias() = lead.transpose() * lagged;
  }
  out.data /= out.divisor;
  detail::validate_lag_matrix(out);
  return out;
}

/// Lag-tau sample auto-correlation matrix: the auto-covariance normalized on
/// both sides by the inverse square roots of the lag-0 variances. Both
/// factors use the lag-0 window's variances in the matching centered or
/// non-centered convention.
inline LagMatrix autocorr(const ErrorPanel& panel, int tau, bool centered) {
  LagMatrix out = autocov(panel, tau, centered);
  const Eigen::VectorXd sumsq = detail::lag0_sumsq(panel, centered);
  // Zero-variance guard: fires only on pathological constant columns.
  for (int j = 0; j < sumsq.size(); ++j) {
    if (sumsq(j) < 1e-30) {
      throw std::domain_error("autocorr: column " + std::to_string(j) +
                              " has (near-)zero variance in the lag-0 window");
    }
  }
  const Eigen::ArrayXd inv_sd = (sumsq.array() / out.divisor).sqrt().inverse();
  out.data = inv_sd.matrix().asDiagonal() * out.data * inv_sd.matrix().asDiagonal();
  out.normalized = true;
  detail::validate_lag_matrix(out);
  return out;
}

/// A A^t, exactly symmetrized after the product to kill roundoff skew.
inline SymProduct sym_product(const LagMatrix& m) {
  SymProduct out;
  out.source_lag = m.lag;
  Eigen::MatrixXd prod = m.data * m.data.transpose();
  out.data = 0.5 * (prod + prod.transpose());
  return out;
}

/// (1/p) tr(A).
inline double normalized_trace(const SymProduct& sp) {
  return sp.data.trace() / static_cast<double>(sp.dim());
}

}  // namespace spectra
