#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "spectra/errors.hpp"
#include "spectra/lag_matrix.hpp"

namespace spectra {

/// All eigenvalues of a symmetric matrix, ascending, with a verified
/// residual bound max_k ||A v_k - lambda_k v_k|| / ||A||_2.
struct Spectrum {
  std::vector<double> values;   // ascending
  double residual_bound = 0.0;

  int size() const { return static_cast<int>(values.size()); }
  double min() const { return values.front(); }
  double max() const { return values.back(); }
};

namespace detail {

inline void check_symmetric_input(const Eigen::MatrixXd& a, const char* where) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument(std::string(where) + ": matrix must be square");
  }
  if (a.size() == 0) {
    throw std::invalid_argument(std::string(where) + ": matrix must be non-empty");
  }
  if (!a.allFinite()) {
    throw std::invalid_argument(std::string(where) + ": matrix has non-finite entries");
  }
  const double scale = a.array().abs().maxCoeff();
  const double skew = (a - a.transpose()).array().abs().maxCoeff();
  if (skew > 1e-10 * std::max(scale, 1e-300)) {
    throw std::invalid_argument(std::string(where) + ": matrix is not symmetric");
  }
}

}  // namespace detail

/// Full symmetric eigensolve, eigenvalues only in the result. Eigenvectors
/// are formed internally to certify the residual bound, then discarded.
/// Deterministic for fixed input.
inline Spectrum sym_eigenvalues(const Eigen::MatrixXd& a) {
  detail::check_symmetric_input(a, "sym_eigenvalues");
  const int p = static_cast<int>(a.rows());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw numeric_error("sym_eigenvalues: eigensolver failed to converge");
  }
  const Eigen::VectorXd& lam = solver.eigenvalues();  // ascending
  const Eigen::MatrixXd& vec = solver.eigenvectors();

  Spectrum out;
  out.values.assign(lam.data(), lam.data() + p);

  const double norm2 = std::max(std::abs(lam(0)), std::abs(lam(p - 1)));
  if (norm2 > 0.0) {
    const Eigen::MatrixXd resid = a * vec - vec * lam.asDiagonal();
    out.residual_bound = resid.colwise().norm().maxCoeff() / norm2;
  }
  if (out.residual_bound > 1e-8) {
    throw numeric_error("sym_eigenvalues: residual bound " +
                        std::to_string(out.residual_bound) + " exceeds 1e-8");
  }
  const double maxabs = a.array().abs().maxCoeff();
  const double trace_err = std::abs(lam.sum() - a.trace());
  if (trace_err > 1e-8 * p * std::max(maxabs, 1e-300)) {
    throw numeric_error("sym_eigenvalues: eigenvalue sum deviates from trace");
  }
  return out;
}

/// Singular values of a square matrix: square roots of the eigenvalues of
/// A A^t, ascending. Eigenvalues within -1e-8 * lambda_max of zero are
/// clamped to 0; anything more negative signals a broken product.
inline Spectrum singular_values(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.size() == 0) {
    throw std::invalid_argument("singular_values: matrix must be square and non-empty");
  }
  if (!a.allFinite()) {
    throw std::invalid_argument("singular_values: matrix has non-finite entries");
  }
  Eigen::MatrixXd prod = a * a.transpose();
  prod = 0.5 * (prod + prod.transpose());
  Spectrum spec = sym_eigenvalues(prod);

  const double lam_max = std::max(spec.max(), 0.0);
  for (double& v : spec.values) {
    if (v < 0.0) {
      if (v < -1e-8 * lam_max) {
        throw numeric_error("singular_values: eigenvalue of A A^t is negative beyond "
                            "tolerance; product is inconsistent");
      }
      v = 0.0;
    }
    v = std::sqrt(v);
  }
  return spec;
}

/// Largest eigenvalue via shifted power iteration (tolerance 1e-10, cap 1e5
/// iterations). Throws numeric_error on non-convergence; callers fall back
/// to the full solve.
inline double largest_eigenvalue(const Eigen::MatrixXd& a) {
  detail::check_symmetric_input(a, "largest_eigenvalue");
  const int p = static_cast<int>(a.rows());
  if (p == 1) return a(0, 0);

  // Shift by the row-sum norm so the target becomes the dominant eigenvalue
  // of a PSD matrix.
  const double shift = a.cwiseAbs().rowwise().sum().maxCoeff();
  Eigen::VectorXd v(p);
  for (int i = 0; i < p; ++i) v(i) = 1.0 + static_cast<double>(i % 17) / 16.0;
  v.normalize();

  double theta = 0.0;
  double theta_prev = std::numeric_limits<double>::infinity();
  constexpr int kMaxIter = 100000;
  for (int it = 0; it < kMaxIter; ++it) {
    Eigen::VectorXd w = a * v + shift * v;
    const double norm = w.norm();
    if (norm == 0.0) return -shift;  // a = -shift * I on the start vector
    w /= norm;
    theta = w.dot(a * w);
    if (std::abs(theta - theta_prev) <= 1e-10 * std::max(1.0, std::abs(theta))) {
      return theta;
    }
    theta_prev = theta;
    v.swap(w);
  }
  throw numeric_error("largest_eigenvalue: power iteration did not converge in 1e5 "
                      "iterations; use the full eigensolve");
}

/// Spectrum of the symmetrized product, with eigenvalues below the relative
/// zero threshold snapped to exactly 0. The snap realizes the structural
/// rank deficiency (at least p - n null directions when p > n) that floating
/// point otherwise scatters across +-1e-16.
inline Spectrum sym_product_spectrum(const SymProduct& sp, double zero_threshold = 1e-8) {
  Spectrum spec = sym_eigenvalues(sp.data);
  const double cut = zero_threshold * std::max(spec.max(), 0.0);
  // Ascending input: the snapped entries form a prefix, so order survives.
  for (double& v : spec.values) {
    if (v < cut) v = 0.0;
  }
  return spec;
}

}  // namespace spectra
