#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "spectra/spectrum.hpp"

namespace spectra {

/// Empirical CDF: mass 1/len at each support point, right-continuous.
struct Ecdf {
  std::vector<double> points;  // ascending, ties allowed

  explicit Ecdf(std::vector<double> pts) : points(std::move(pts)) {
    if (points.empty()) throw std::invalid_argument("Ecdf: no support points");
    std::sort(points.begin(), points.end());
  }

  std::size_t size() const { return points.size(); }

  /// F(x) = #(points <= x) / len.
  double operator()(double x) const {
    const auto it = std::upper_bound(points.begin(), points.end(), x);
    return static_cast<double>(it - points.begin()) / static_cast<double>(points.size());
  }

  /// Left limit F(x-) = #(points < x) / len.
  double left(double x) const {
    const auto it = std::lower_bound(points.begin(), points.end(), x);
    return static_cast<double>(it - points.begin()) / static_cast<double>(points.size());
  }
};

/// Empirical spectral distribution of a computed spectrum.
inline Ecdf esd(const Spectrum& spectrum) {
  if (spectrum.values.empty()) throw std::invalid_argument("esd: empty spectrum");
  return Ecdf(spectrum.values);
}

namespace detail {

inline std::vector<double> merged_unique(const std::vector<double>& a,
                                         const std::vector<double>& b) {
  std::vector<double> merged;
  merged.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(merged));
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  return merged;
}

}  // namespace detail

/// sup |F - G| for two step functions: attained at a jump of either.
inline double ks_distance(const Ecdf& f, const Ecdf& g) {
  double d = 0.0;
  for (double x : detail::merged_unique(f.points, g.points)) {
    d = std::max(d, std::abs(f(x) - g(x)));
  }
  return d;
}

/// sup |F - Law| against an analytic CDF with an optional atom at the
/// origin. Both one-sided limits are compared at every ECDF jump and at the
/// atom, which covers the supremum exactly for a law that is continuous
/// elsewhere.
template <class Law>
double ks_distance(const Ecdf& f, const Law& law) {
  std::vector<double> xs = f.points;
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  if (law.point_mass_at(0.0) > 0.0) {
    const auto it = std::lower_bound(xs.begin(), xs.end(), 0.0);
    if (it == xs.end() || *it != 0.0) xs.insert(it, 0.0);
  }
  const std::vector<double> cdf = law.cdf_grid(xs);
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double right = std::abs(f(xs[i]) - cdf[i]);
    const double left = std::abs(f.left(xs[i]) - (cdf[i] - law.point_mass_at(xs[i])));
    d = std::max({d, right, left});
  }
  return d;
}

/// Grid-scan sup-distance between two analytic CDFs over the union of their
/// supports (lower bound, refined by grid density).
template <class LawA, class LawB>
double ks_distance(const LawA& fa, const LawB& fb, int grid_points = 4001) {
  const double lo = std::min(fa.lower_edge(), fb.lower_edge());
  const double hi = std::max(fa.upper_edge(), fb.upper_edge());
  std::vector<double> xs;
  xs.reserve(grid_points + 1);
  if (0.0 < lo) xs.push_back(0.0);
  for (int i = 0; i <= grid_points; ++i) {
    xs.push_back(lo + (hi - lo) * static_cast<double>(i) / grid_points);
  }
  const std::vector<double> ca = fa.cdf_grid(xs);
  const std::vector<double> cb = fb.cdf_grid(xs);
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    d = std::max(d, std::abs(ca[i] - cb[i]));
  }
  return d;
}

/// Levy distance L(F, G) = inf{eps > 0 : F(x-eps)-eps <= G(x) <= F(x+eps)+eps
/// for all x}, computed by bisection on eps with an exact feasibility check
/// for step functions (both sides are piecewise constant, so checking every
/// breakpoint right-value is exhaustive).
inline double levy_distance(const Ecdf& f, const Ecdf& g, double accuracy = 1e-6) {
  // Both sides of each inequality are right-continuous step functions of x,
  // so right-value checks at every breakpoint are exhaustive. At breakpoints
  // inherited from F the shifted argument is evaluated as F at the jump
  // itself; re-deriving it as (s +- eps) -+ eps can land one ulp off the jump
  // and mis-count a whole 1/n step.
  const auto feasible = [&](double eps) {
    for (double t : g.points) {
      const double gt = g(t);
      if (gt < f(t - eps) - eps) return false;  // F(x-eps)-eps <= G(x)
      if (gt > f(t + eps) + eps) return false;  // G(x) <= F(x+eps)+eps
    }
    for (double s : f.points) {
      const double fs = f(s);
      if (g(s + eps) < fs - eps) return false;  // x = s + eps in the lower bound
      if (g(s - eps) > fs + eps) return false;  // x = s - eps in the upper bound
    }
    return true;
  };

  double lo = 0.0, hi = 1.0;  // L <= KS <= 1 always
  if (feasible(0.0)) return 0.0;
  while (hi - lo > accuracy * 0.5) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return hi;
}

/// Largest-eigenvalue boxplot ingredients for a batch of replications.
struct EigenvalueSummary {
  std::vector<double> lambda_max;  // per replication, input order
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

namespace detail {

/// Linear-interpolation quantile (type 7) of a sorted sample.
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double h = q * (static_cast<double>(sorted.size()) - 1.0);
  const auto i = static_cast<std::size_t>(h);
  if (i + 1 >= sorted.size()) return sorted.back();
  return sorted[i] + (h - static_cast<double>(i)) * (sorted[i + 1] - sorted[i]);
}

}  // namespace detail

inline EigenvalueSummary eigenvalue_summary(const std::vector<Spectrum>& spectra) {
  if (spectra.empty()) throw std::invalid_argument("eigenvalue_summary: no spectra");
  EigenvalueSummary out;
  out.lambda_max.reserve(spectra.size());
  for (const Spectrum& s : spectra) out.lambda_max.push_back(s.max());
  std::vector<double> sorted = out.lambda_max;
  std::sort(sorted.begin(), sorted.end());
  out.min = sorted.front();
  out.max = sorted.back();
  out.q1 = detail::quantile_sorted(sorted, 0.25);
  out.median = detail::quantile_sorted(sorted, 0.5);
  out.q3 = detail::quantile_sorted(sorted, 0.75);
  return out;
}

}  // namespace spectra
