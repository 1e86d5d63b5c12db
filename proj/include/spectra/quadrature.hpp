#pragma once

#include <array>
#include <cmath>

namespace spectra {
namespace quad {

namespace detail {

// 15-point Kronrod extension of 7-point Gauss on [-1, 1] (QUADPACK dqk15).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss-7 weights, matching Kronrod nodes 1, 3, 5, 7.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
void gk15_panel(const F& f, double lo, double hi, double& kronrod, double& err) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  const double fc = f(c);
  double gauss = kGaussWeights[3] * fc;
  kronrod = kKronrodWeights[7] * fc;
  for (int i = 0; i < 7; ++i) {
    const double x = h * kKronrodNodes[i];
    const double sum = f(c - x) + f(c + x);
    kronrod += kKronrodWeights[i] * sum;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * sum;
  }
  kronrod *= h;
  gauss *= h;
  err = std::abs(kronrod - gauss);
}

template <class F>
double adaptive_impl(const F& f, double lo, double hi, double tol, int depth) {
  double value = 0.0;
  double err = 0.0;
  gk15_panel(f, lo, hi, value, err);
  if (err <= tol || depth <= 0) return value;
  const double mid = 0.5 * (lo + hi);
  return adaptive_impl(f, lo, mid, 0.5 * tol, depth - 1) +
         adaptive_impl(f, mid, hi, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (G7/K15) integration with bisection refinement.
/// End points are never evaluated; integrable endpoint singularities converge
/// through the depth-capped recursion.
template <class F>
double adaptive(const F& f, double lo, double hi, double abs_tol, int max_depth = 50) {
  if (!(hi > lo)) return 0.0;
  return detail::adaptive_impl(f, lo, hi, abs_tol, max_depth);
}

/// integral_{edge}^{x} f(u) du under u = edge + t^2: restores smoothness at a
/// lower support edge where f behaves like an inverse square root.
template <class F>
double from_lower_edge(const F& f, double edge, double x, double abs_tol) {
  if (!(x > edge)) return 0.0;
  const double t_hi = std::sqrt(x - edge);
  return adaptive([&](double t) { return 2.0 * t * f(edge + t * t); }, 0.0, t_hi, abs_tol);
}

/// integral_{x}^{edge} f(u) du under u = edge - t^2 (upper support edge).
template <class F>
double to_upper_edge(const F& f, double x, double edge, double abs_tol) {
  if (!(edge > x)) return 0.0;
  const double t_hi = std::sqrt(edge - x);
  return adaptive([&](double t) { return 2.0 * t * f(edge - t * t); }, 0.0, t_hi, abs_tol);
}

}  // namespace quad
}  // namespace spectra
