#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "spectra/ecdf.hpp"
#include "spectra/limit_law.hpp"
#include "spectra/rng.hpp"

using namespace spectra;
using Catch::Approx;

namespace {

// Test-local analytic CDF adapter (continuous, no atoms).
struct NormalLaw {
  double lower_edge() const { return -6.0; }
  double upper_edge() const { return 6.0; }
  double point_mass_at(double) const { return 0.0; }
  double cdf(double x) const { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
  std::vector<double> cdf_grid(const std::vector<double>& xs) const {
    std::vector<double> out;
    out.reserve(xs.size());
    for (double x : xs) out.push_back(cdf(x));
    return out;
  }
};

Spectrum fake_spectrum(std::vector<double> values) {
  Spectrum s;
  s.values = std::move(values);
  std::sort(s.values.begin(), s.values.end());
  return s;
}

}  // namespace

TEST_CASE("esd: definition and counting oracle") {
  const Ecdf f = esd(fake_spectrum({1.0, 2.0, 3.0}));
  CHECK(f(2.0) == Approx(2.0 / 3.0));
  CHECK(f(0.0) == 0.0);   // below the minimum
  CHECK(f(3.0) == 1.0);   // at the maximum

  // 500 pseudo-uniform values vs direct counting at 100 query points.
  SplitMix64 rng(123);
  std::vector<double> vals;
  for (int i = 0; i < 500; ++i) vals.push_back(rng.next_unit());
  const Ecdf g = esd(fake_spectrum(vals));
  std::vector<double> sorted = vals;
  std::sort(sorted.begin(), sorted.end());
  for (int q = 0; q < 100; ++q) {
    const double x = q / 99.0;
    CHECK(g(x) == oracle::ecdf_at(sorted, x));
  }

  CHECK_THROWS_AS(esd(Spectrum{}), std::invalid_argument);
}

TEST_CASE("ks distance: identical, point masses, DKW band") {
  const Ecdf f = esd(fake_spectrum({0.5, 1.5, 2.5}));
  CHECK(ks_distance(f, f) == 0.0);

  const Ecdf d0 = esd(fake_spectrum({0.0}));
  const Ecdf d1 = esd(fake_spectrum({1.0}));
  CHECK(ks_distance(d0, d1) == 1.0);

  ScalarSampler normal(DistributionSpec::standard_normal(), 314159);
  std::vector<double> draws;
  draws.reserve(10000);
  for (int i = 0; i < 10000; ++i) draws.push_back(normal.next());
  CHECK(ks_distance(Ecdf(draws), NormalLaw{}) < 0.03);
}

TEST_CASE("ks distance handles an atom in the analytic law") {
  // ECDF with half its mass exactly at 0 against the y=2 law (atom 0.5 at 0):
  // the comparison must use left limits at the atom, not the right value.
  const LsdLaw law(2.0);
  const auto [a, b] = support_edges(2.0);
  std::vector<double> vals(50, 0.0);
  for (int i = 0; i < 50; ++i) {
    // Spread the continuous half roughly per the law quantiles.
    const double q = (i + 0.5) / 50.0;
    double lo = a, hi = b;
    for (int it = 0; it < 40; ++it) {
      const double mid = 0.5 * (lo + hi);
      (lsd_cdf(mid, 2.0) < 0.5 + 0.5 * q ? lo : hi) = mid;
    }
    vals.push_back(0.5 * (lo + hi));
  }
  const double d = ks_distance(Ecdf(vals), law);
  CHECK(d < 0.05);
}

TEST_CASE("levy distance: identical and shifted point masses") {
  const Ecdf f = esd(fake_spectrum({0.25, 0.5, 2.0}));
  CHECK(levy_distance(f, f) == 0.0);

  const Ecdf d0 = esd(fake_spectrum({0.0}));
  for (double c : {0.25, 0.5, 1.0}) {
    const Ecdf dc = esd(fake_spectrum({c}));
    CHECK(levy_distance(d0, dc) == Approx(c).margin(1e-6));
  }
}

TEST_CASE("levy distance matches the dense grid-scan oracle") {
  SplitMix64 rng(2718);
  for (int trial = 0; trial < 4; ++trial) {
    std::vector<double> fv, gv;
    for (int i = 0; i < 100; ++i) {
      fv.push_back(rng.next_unit());
      gv.push_back(0.15 * trial + 0.7 * rng.next_unit());
    }
    const double mine = levy_distance(Ecdf(fv), Ecdf(gv));
    const double ref = oracle::levy_grid_scan(fv, gv, 5e-5);
    CHECK(mine == Approx(ref).margin(1e-4));
  }
}

TEST_CASE("levy distance never exceeds ks distance") {
  SplitMix64 rng(999);
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<double> fv, gv;
    for (int i = 0; i < 60; ++i) {
      fv.push_back(2.0 * rng.next_unit());
      gv.push_back(2.0 * rng.next_unit() + 0.1 * trial);
    }
    const Ecdf f{fv}, g{gv};
    CHECK(levy_distance(f, g) <= ks_distance(f, g) + 1e-9);
  }
}

TEST_CASE("eigenvalue summary: trivial cases") {
  const Spectrum two = fake_spectrum({1.0, 2.0});
  const EigenvalueSummary single = eigenvalue_summary({two});
  CHECK(single.lambda_max == std::vector<double>{2.0});
  CHECK(single.median == 2.0);

  const EigenvalueSummary three = eigenvalue_summary(
      {fake_spectrum({0.5, 1.0}), fake_spectrum({2.0}), fake_spectrum({3.0})});
  CHECK(three.median == 2.0);
  CHECK(three.min == 1.0);
  CHECK(three.max == 3.0);

  CHECK_THROWS_AS(eigenvalue_summary({}), std::invalid_argument);
}
