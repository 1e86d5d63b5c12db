#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spectra/errors.hpp"
#include "spectra/quadrature.hpp"

namespace spectra {

/// Limiting spectral law of the symmetrized lag-tau sample auto-correlation
/// matrix at aspect ratio y = lim p/n: support edges, point mass at zero.
/// For y < 1 the continuous support is (0, b] and `a` is the raw edge
/// formula value (negative, informational only).
struct SpectralLaw {
  double y = 0.0;
  double a = 0.0;
  double b = 0.0;
  double point_mass_at_zero = 0.0;
};

/// Support edges: a,b = (-1 + 20y + 8y^2 -/+ (1+8y)^{3/2}) / 8.
/// Exact at y = 1: (0, 6.75).
inline std::pair<double, double> support_edges(double y) {
  if (!(y > 0.0)) throw std::invalid_argument("support_edges: y must be > 0");
  const double s = 1.0 + 8.0 * y;
  const double t = s * std::sqrt(s);  // (1+8y)^{3/2}, exact when s is a perfect square
  const double base = -1.0 + 20.0 * y + 8.0 * y * y;
  return {(base - t) / 8.0, (base + t) / 8.0};
}

inline SpectralLaw spectral_law(double y) {
  const auto [a, b] = support_edges(y);
  return {y, a, b, std::max(0.0, 1.0 - 1.0 / y)};
}

namespace detail {

/// Coefficients {c2, c1, c0} of the quadratic factor
/// q(u) = c2 u^2 + c1 u + c0 = -4u^2 + (-1 + 4y(5+2y))u - 4y(y-1)^3
/// whose roots are the support edges; u * q(u) is the radicand inside d(u).
inline std::array<double, 3> edge_quadratic_coefficients(double y) {
  const double ym1 = y - 1.0;
  return {-4.0, -1.0 + 4.0 * y * (5.0 + 2.0 * y), -4.0 * y * ym1 * ym1 * ym1};
}

}  // namespace detail

/// Closed-form density of the limiting law, zero off the support.
/// The Cardano intermediate d(u)^{1/3} is taken as the principal complex cube
/// root; the result must come back real up to a 1e-8 residue.
inline double lsd_density(double u, double y) {
  if (!(y > 0.0)) throw std::invalid_argument("lsd_density: y must be > 0");
  const auto [a, b] = support_edges(y);
  const double lo = y < 1.0 ? 0.0 : a;
  if (!(u > 0.0) || u < lo || u > b) return 0.0;

  const auto [q2, q1, q0] = detail::edge_quadratic_coefficients(y);
  double radicand = u * ((q2 * u + q1) * u + q0);
  if (radicand < 0.0) {
    // Inside the support the radicand is >= 0 up to roundoff near the edges.
    if (radicand < -1e-9 * std::max(1.0, u * u * u)) {
      throw numeric_error("lsd_density: radicand " + std::to_string(radicand) +
                          " leaves the radical domain at u=" + std::to_string(u));
    }
    radicand = 0.0;
  }

  using C = std::complex<double>;
  const double ym1 = y - 1.0;
  const C d = C(-2.0 * ym1 * ym1 * ym1 + 9.0 * (1.0 + 2.0 * y) * u, 0.0) +
              3.0 * std::numbers::sqrt3 * std::sqrt(C(radicand, 0.0));
  const C dc = std::pow(d, 1.0 / 3.0);

  const double two43 = std::pow(2.0, 4.0 / 3.0);
  const double two23 = std::pow(2.0, 2.0 / 3.0);
  const C t1(-u - 5.0 * ym1 * ym1 / 3.0, 0.0);
  const C t2 = two43 * (3.0 * u + ym1 * ym1) * ym1 / (3.0 * dc);
  const C t3 = two23 * ym1 * dc / 3.0;
  const C s = C(-8.0 * ym1, 0.0) + two43 * (3.0 * u + ym1 * ym1) / dc + two23 * dc;
  const C t4 = s * s / 48.0;
  C bracket = t1 + t2 + t3 + t4;

  // Roundoff floor for the bracket, measured against its own terms.
  const double term_scale =
      std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4);
  if (bracket.real() < 0.0 && bracket.real() > -1e-12 * std::max(1.0, term_scale)) {
    bracket.real(0.0);
  }

  const C val = std::sqrt(bracket) / (y * std::numbers::pi * u);
  if (std::abs(val.imag()) > 1e-8) {
    throw numeric_error("lsd_density: imaginary residue " + std::to_string(val.imag()) +
                        " at u=" + std::to_string(u));
  }
  double f = val.real();
  if (f < 0.0) {
    if (f <= -1e-10) {
      throw numeric_error("lsd_density: negative density " + std::to_string(f) +
                          " at u=" + std::to_string(u));
    }
    f = 0.0;
  }
  return f;
}

/// Stieltjes transform evaluation: the argument, the transform value, and the
/// residual of the value in the defining cubic.
struct StieltjesValue {
  std::complex<double> z;
  std::complex<double> m;
  double residual = 0.0;
};

namespace detail {

inline std::complex<double> principal_cbrt(std::complex<double> w) {
  if (w == std::complex<double>(0.0, 0.0)) return {0.0, 0.0};
  return std::pow(w, 1.0 / 3.0);
}

/// Roots of m^3 + c2 m^2 + c1 m + c0 via Cardano with Newton polish.
inline std::array<std::complex<double>, 3> solve_monic_cubic(std::complex<double> c2,
                                                             std::complex<double> c1,
                                                             std::complex<double> c0) {
  using C = std::complex<double>;
  const C third(1.0 / 3.0, 0.0);
  const C shift = c2 * third;
  const C p = c1 - c2 * c2 * third;
  const C q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 * third + c0;

  const C disc = q * q * 0.25 + p * p * p / 27.0;
  const C s = std::sqrt(disc);
  // Pick the better-conditioned branch of -q/2 +- s.
  C base = (std::abs(-q * 0.5 + s) >= std::abs(-q * 0.5 - s)) ? -q * 0.5 + s : -q * 0.5 - s;
  C cube = principal_cbrt(base);

  std::array<C, 3> roots;
  if (std::abs(cube) == 0.0) {
    roots = {-shift, -shift, -shift};  // p = q = 0: triple root
  } else {
    const C omega(-0.5, std::numbers::sqrt3 / 2.0);
    C w = cube;
    for (int k = 0; k < 3; ++k) {
      roots[k] = w - p / (3.0 * w) - shift;
      w *= omega;
    }
  }
  // Newton polish on the monic cubic.
  for (auto& m : roots) {
    for (int it = 0; it < 3; ++it) {
      const C h = ((m + c2) * m + c1) * m + c0;
      const C hp = (3.0 * m + 2.0 * c2) * m + c1;
      if (std::abs(hp) == 0.0) break;
      m -= h / hp;
    }
  }
  return roots;
}

}  // namespace detail

/// Solves z^2 y^2 m^3 + z y (y-1) m^2 - z m - 1 = 0 for the Stieltjes
/// transform branch: the unique root with Im m > 0 that is also consistent
/// with a measure supported on [0, inf), i.e. Im(z m) >= 0.
inline StieltjesValue stieltjes_m(std::complex<double> z, double y) {
  using C = std::complex<double>;
  if (!(y > 0.0)) throw std::invalid_argument("stieltjes_m: y must be > 0");
  if (!(z.imag() > 0.0)) throw std::invalid_argument("stieltjes_m: Im z must be > 0");

  const C lead = z * z * y * y;
  const auto roots = detail::solve_monic_cubic(z * y * (y - 1.0) / lead, -z / lead,
                                               C(-1.0, 0.0) / lead);

  int herglotz_count = 0;
  C chosen;
  for (const C& m : roots) {
    if (m.imag() > 1e-12 && (z * m).imag() > -1e-12) {
      ++herglotz_count;
      chosen = m;
    }
  }
  if (herglotz_count != 1) {
    throw numeric_error("stieltjes_m: found " + std::to_string(herglotz_count) +
                        " admissible roots (z too close to the real axis, or a "
                        "solver defect)");
  }

  StieltjesValue out;
  out.z = z;
  out.m = chosen;
  out.residual = std::abs(lead * chosen * chosen * chosen +
                          z * y * (y - 1.0) * chosen * chosen - z * chosen - 1.0);
  const double zmag = std::abs(z);
  if (out.residual > 1e-10 * (1.0 + zmag * zmag * zmag)) {
    throw numeric_error("stieltjes_m: cubic residual " + std::to_string(out.residual) +
                        " exceeds tolerance");
  }
  return out;
}

/// Marcenko-Pastur density with unit variance:
/// f_y(u) = sqrt((b-u)(u-a)) / (2 pi u y) on [a, b], a,b = (1 -/+ sqrt(y))^2.
inline double mp_density(double u, double y) {
  if (!(y > 0.0)) throw std::invalid_argument("mp_density: y must be > 0");
  const double sq = std::sqrt(y);
  const double a = (1.0 - sq) * (1.0 - sq);
  const double b = (1.0 + sq) * (1.0 + sq);
  if (u < a || u > b || !(u > 0.0)) return 0.0;
  const double rad = (b - u) * (u - a);
  if (rad <= 0.0) return 0.0;
  return std::sqrt(rad) / (2.0 * std::numbers::pi * u * y);
}

namespace detail {

/// Shared CDF machinery: point mass at zero plus the integral of the
/// continuous density from the lower support edge, with square-root
/// substitutions applied at both edges.
template <class Density>
double law_cdf_impl(const Density& density, double lo, double hi, double point_mass,
                    double x, double abs_tol) {
  const double atom = x >= 0.0 ? point_mass : 0.0;
  const double upper = std::min(x, hi);
  if (!(upper > lo)) return atom;
  const double mid = 0.5 * (lo + hi);
  if (upper <= mid) {
    return atom + quad::from_lower_edge(density, lo, upper, abs_tol);
  }
  double mass = quad::from_lower_edge(density, lo, mid, 0.5 * abs_tol);
  if (upper >= hi) {
    mass += quad::to_upper_edge(density, mid, hi, 0.5 * abs_tol);
  } else {
    mass += quad::adaptive(density, mid, upper, 0.5 * abs_tol);
  }
  return atom + mass;
}

/// Cumulative CDF values over an ascending grid, integrating each segment
/// once. Tolerances are per-segment; suitable for distribution distances,
/// not for 1e-8 mass accounting.
template <class Density>
std::vector<double> law_cdf_grid_impl(const Density& density, double lo, double hi,
                                      double point_mass, const std::vector<double>& xs) {
  std::vector<double> out;
  out.reserve(xs.size());
  double pos = lo;
  double acc = 0.0;
  bool first_segment = true;
  for (double x : xs) {
    const double target = std::min(x, hi);
    if (target > pos) {
      if (first_segment) {
        acc += quad::from_lower_edge(density, lo, target, 1e-10);
        first_segment = false;
      } else {
        acc += quad::adaptive(density, pos, target, 1e-10);
      }
      pos = target;
    }
    out.push_back((x >= 0.0 ? point_mass : 0.0) + acc);
  }
  return out;
}

}  // namespace detail

/// F(x) for the lag-tau auto-correlation limit law: point mass (y > 1) at the
/// origin plus adaptive quadrature of the closed-form density.
inline double lsd_cdf(double x, double y, double abs_tol = 1e-8) {
  const SpectralLaw law = spectral_law(y);
  const double lo = y < 1.0 ? 0.0 : law.a;
  return detail::law_cdf_impl([y](double u) { return lsd_density(u, y); }, lo, law.b,
                              law.point_mass_at_zero, x, abs_tol);
}

/// Marcenko-Pastur CDF with the same conventions as lsd_cdf.
inline double mp_cdf(double x, double y, double abs_tol = 1e-8) {
  const double sq = std::sqrt(y);
  const double a = (1.0 - sq) * (1.0 - sq);
  const double b = (1.0 + sq) * (1.0 + sq);
  return detail::law_cdf_impl([y](double u) { return mp_density(u, y); }, a, b,
                              std::max(0.0, 1.0 - 1.0 / y), x, abs_tol);
}

/// CDF adapter for distribution-distance computations against ECDFs:
/// pointwise and batched evaluation plus the atom at the origin.
class LsdLaw {
 public:
  explicit LsdLaw(double y) : law_(spectral_law(y)) {
    lo_ = y < 1.0 ? 0.0 : law_.a;
  }

  double y() const { return law_.y; }
  double lower_edge() const { return lo_; }
  double upper_edge() const { return law_.b; }
  double point_mass_at(double x) const { return x == 0.0 ? law_.point_mass_at_zero : 0.0; }
  double density(double u) const { return lsd_density(u, law_.y); }
  double cdf(double x) const { return lsd_cdf(x, law_.y); }
  std::vector<double> cdf_grid(const std::vector<double>& ascending_xs) const {
    return detail::law_cdf_grid_impl([this](double u) { return density(u); }, lo_, law_.b,
                                     law_.point_mass_at_zero, ascending_xs);
  }

 private:
  SpectralLaw law_;
  double lo_ = 0.0;
};

class MpLaw {
 public:
  explicit MpLaw(double y) : y_(y) {
    const double sq = std::sqrt(y);
    a_ = (1.0 - sq) * (1.0 - sq);
    b_ = (1.0 + sq) * (1.0 + sq);
    pm_ = std::max(0.0, 1.0 - 1.0 / y);
  }

  double y() const { return y_; }
  double lower_edge() const { return a_; }
  double upper_edge() const { return b_; }
  double point_mass_at(double x) const { return x == 0.0 ? pm_ : 0.0; }
  double density(double u) const { return mp_density(u, y_); }
  double cdf(double x) const { return mp_cdf(x, y_); }
  std::vector<double> cdf_grid(const std::vector<double>& ascending_xs) const {
    return detail::law_cdf_grid_impl([this](double u) { return density(u); }, a_, b_, pm_,
                                     ascending_xs);
  }

 private:
  double y_, a_, b_, pm_;
};

}  // namespace spectra
