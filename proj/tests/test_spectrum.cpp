#include <catch2/catch_amalgamated.hpp>

#include <Eigen/QR>
#include <cmath>

#include "oracles.hpp"
#include "spectra/rng.hpp"
#include "spectra/spectrum.hpp"

using namespace spectra;

namespace {

Eigen::MatrixXd random_symmetric(int n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = 2.0 * rng.next_unit() - 1.0;
  return 0.5 * (a + a.transpose()).eval();
}

oracle::Matrix to_oracle(const Eigen::MatrixXd& m) {
  oracle::Matrix out(m.rows(), std::vector<double>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

}  // namespace

TEST_CASE("sym_eigenvalues: identity and 2x2 hand case") {
  const Spectrum id = sym_eigenvalues(Eigen::MatrixXd::Identity(5, 5));
  for (double v : id.values) CHECK(v == Catch::Approx(1.0).margin(1e-14));

  Eigen::MatrixXd a(2, 2);
  a << 2.0, 1.0, 1.0, 2.0;
  const Spectrum s = sym_eigenvalues(a);
  CHECK(s.values[0] == Catch::Approx(1.0).margin(1e-12));
  CHECK(s.values[1] == Catch::Approx(3.0).margin(1e-12));
}

TEST_CASE("sym_eigenvalues matches characteristic-polynomial bisection") {
  const Eigen::MatrixXd a = random_symmetric(5, 1001);
  const Spectrum s = sym_eigenvalues(a);
  const auto roots = oracle::eigenvalues_by_bisection(to_oracle(a));
  REQUIRE(roots.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(s.values[i] == Catch::Approx(roots[i]).margin(1e-8));
}

TEST_CASE("sym_eigenvalues: invariants and error paths") {
  const Eigen::MatrixXd a = random_symmetric(30, 2002);
  const Spectrum s = sym_eigenvalues(a);
  CHECK(s.residual_bound <= 1e-8);
  CHECK(std::is_sorted(s.values.begin(), s.values.end()));
  double sum = 0.0;
  for (double v : s.values) sum += v;
  CHECK(std::abs(sum - a.trace()) <= 1e-8 * 30 * a.array().abs().maxCoeff());

  Eigen::MatrixXd skew = a;
  skew(0, 1) += 1.0;
  CHECK_THROWS_AS(sym_eigenvalues(skew), std::invalid_argument);

  Eigen::MatrixXd bad = a;
  bad(2, 2) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(sym_eigenvalues(bad), std::invalid_argument);

  CHECK_THROWS_AS(sym_eigenvalues(Eigen::MatrixXd::Random(3, 4)), std::invalid_argument);
}

TEST_CASE("eigenvalues are invariant under orthogonal conjugation") {
  const Eigen::MatrixXd a = random_symmetric(10, 3003);
  Eigen::MatrixXd g(10, 10);
  SplitMix64 rng(4004);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) g(i, j) = 2.0 * rng.next_unit() - 1.0;
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
  Eigen::MatrixXd conj = q.transpose() * a * q;
  conj = 0.5 * (conj + conj.transpose()).eval();
  const Spectrum sa = sym_eigenvalues(a);
  const Spectrum sc = sym_eigenvalues(conj);
  for (int i = 0; i < 10; ++i) CHECK(sa.values[i] == Catch::Approx(sc.values[i]).margin(1e-7));
}

TEST_CASE("singular_values: identity, diagonal, cross-check") {
  const Spectrum id = singular_values(Eigen::MatrixXd::Identity(4, 4));
  for (double v : id.values) CHECK(v == Catch::Approx(1.0).margin(1e-12));

  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
  d(0, 0) = -3.0;
  d(1, 1) = 4.0;
  const Spectrum sd = singular_values(d);
  CHECK(sd.values[0] == Catch::Approx(3.0).margin(1e-12));
  CHECK(sd.values[1] == Catch::Approx(4.0).margin(1e-12));

  SplitMix64 rng(5005);
  Eigen::MatrixXd a(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = 2.0 * rng.next_unit() - 1.0;
  const Spectrum sv = singular_values(a);
  Eigen::MatrixXd prod = a * a.transpose();
  prod = 0.5 * (prod + prod.transpose()).eval();
  const Spectrum ev = sym_eigenvalues(prod);
  for (int i = 0; i < 4; ++i) {
    CHECK(sv.values[i] == Catch::Approx(std::sqrt(std::max(0.0, ev.values[i]))).margin(1e-8));
  }
}

TEST_CASE("largest_eigenvalue agrees with the full solve") {
  Eigen::MatrixXd d = Eigen::Vector3d(1.0, 2.0, 7.0).asDiagonal();
  CHECK(largest_eigenvalue(d) == Catch::Approx(7.0).margin(1e-9));
  CHECK(largest_eigenvalue(Eigen::MatrixXd::Identity(6, 6)) == Catch::Approx(1.0).margin(1e-9));

  const Eigen::MatrixXd a = random_symmetric(6, 6006);
  const double lam = largest_eigenvalue(a);
  CHECK(lam == Catch::Approx(sym_eigenvalues(a).max()).margin(1e-8));
}

TEST_CASE("snapped product spectrum keeps order and zeros the null space") {
  Eigen::MatrixXd low(4, 4);
  low.setZero();
  low(0, 0) = 5.0;  // rank one
  SymProduct sp;
  sp.data = low;
  const Spectrum s = sym_product_spectrum(sp);
  CHECK(s.values[0] == 0.0);
  CHECK(s.values[1] == 0.0);
  CHECK(s.values[2] == 0.0);
  CHECK(s.values[3] == Catch::Approx(5.0));
  CHECK(std::is_sorted(s.values.begin(), s.values.end()));
}
