#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace spectra {

/// SplitMix64: 64-bit generator with a single word of explicit state.
/// Reference: Steele, Lea, Flood (2014), "Fast splittable pseudorandom
/// number generators". Passes BigCrush; period 2^64.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on (0, 1]: 53 mantissa bits, never exactly zero (log-safe).
  double next_unit() noexcept {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

namespace detail {

/// Stateless SplitMix64 finalizer: a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stream tag separating factor draws from noise draws in factor panels.
inline constexpr std::uint64_t kFactorStreamTag = 0x9d8b1e7a3c5f2406ULL;

}  // namespace detail

/// Pure derivation of a per-replication seed from a campaign master seed.
/// Distinct indices map to distinct seeds: the finalizer is a bijection and
/// the pre-mix inputs master + (i+1)*odd are pairwise distinct mod 2^64.
constexpr std::uint64_t derive_replication_seed(std::uint64_t master_seed,
                                                std::int64_t replication_index) {
  if (replication_index < 0) {
    throw std::invalid_argument("derive_replication_seed: index must be >= 0");
  }
  const auto step = static_cast<std::uint64_t>(replication_index) + 1;
  return detail::mix64(master_seed + step * 0x9e3779b97f4a7c15ULL);
}

/// Marginal law of panel entries. Every kind is standardized to mean 0,
/// variance 1 and has finite (4+delta)-th absolute moment.
struct DistributionSpec {
  enum class Kind { StandardNormal, Rademacher, CenteredUniform, StudentT };

  Kind kind = Kind::StandardNormal;
  int df = 0;  // StudentT only

  static DistributionSpec standard_normal() { return {Kind::StandardNormal, 0}; }
  static DistributionSpec rademacher() { return {Kind::Rademacher, 0}; }
  static DistributionSpec centered_uniform() { return {Kind::CenteredUniform, 0}; }

  /// StudentT needs df >= 5 so that E|x|^{4+delta} is finite for some
  /// delta > 0; df <= 4 is rejected.
  static DistributionSpec student_t(int df) {
    if (df <= 4) {
      throw std::invalid_argument(
          "DistributionSpec: StudentT requires df >= 5, got df=" + std::to_string(df));
    }
    return {Kind::StudentT, df};
  }

  friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;
};

/// Streams standardized i.i.d. draws from a DistributionSpec.
/// Deterministic in the seed; no global state.
class ScalarSampler {
 public:
  ScalarSampler(const DistributionSpec& spec, std::uint64_t seed)
      : spec_(spec), rng_(seed) {
    if (spec.kind == DistributionSpec::Kind::StudentT && spec.df <= 4) {
      throw std::invalid_argument("ScalarSampler: StudentT requires df >= 5");
    }
  }

  double next() {
    switch (spec_.kind) {
      case DistributionSpec::Kind::StandardNormal:
        return next_normal();
      case DistributionSpec::Kind::Rademacher:
        return (rng_.next() >> 63) ? 1.0 : -1.0;
      case DistributionSpec::Kind::CenteredUniform:
        // Uniform on [-sqrt(3), sqrt(3)] has unit variance.
        return (2.0 * rng_.next_unit() - 1.0) * std::numbers::sqrt3;
      case DistributionSpec::Kind::StudentT:
        return next_student_t();
    }
    return 0.0;  // unreachable
  }

  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // Box-Muller; u1 in (0,1] keeps the log finite.
    const double u1 = rng_.next_unit();
    const double u2 = rng_.next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

 private:
  double next_student_t() {
    // Bailey (1994) polar form, rejection-free: for U,V uniform(0,1),
    // sqrt(df (U^{-2/df} - 1)) cos(2 pi V) is Student-t with df dof.
    const double df = static_cast<double>(spec_.df);
    const double u = rng_.next_unit();
    const double v = rng_.next_unit();
    const double t =
        std::sqrt(df * (std::pow(u, -2.0 / df) - 1.0)) * std::cos(2.0 * std::numbers::pi * v);
    // Rescale to unit variance: Var(t_df) = df/(df-2).
    return t * std::sqrt((df - 2.0) / df);
  }

  DistributionSpec spec_;
  SplitMix64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace spectra
