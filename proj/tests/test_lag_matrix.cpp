#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "spectra/lag_matrix.hpp"
#include "spectra/panel.hpp"
#include "spectra/spectrum.hpp"

using namespace spectra;

namespace {

oracle::Matrix to_oracle(const Eigen::MatrixXd& m) {
  oracle::Matrix out(m.rows(), std::vector<double>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

double max_abs_diff(const Eigen::MatrixXd& a, const oracle::Matrix& b) {
  double d = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - b[i][j]));
  return d;
}

ErrorPanel panel_from(const Eigen::MatrixXd& data, int n, int tau_max) {
  ErrorPanel p;
  p.data = data;
  p.n = n;
  p.tau_max = tau_max;
  p.seed = 0;
  return p;
}

}  // namespace

TEST_CASE("builders match the naive triple-loop oracle on small panels") {
  std::uint64_t seed = 11;
  for (int n : {2, 3, 5, 6}) {
    for (int p : {1, 2, 4, 6}) {
      for (int tau : {0, 1, 2}) {
        if (tau >= n) continue;
        const auto panel =
            sample_error_panel(DistributionSpec::standard_normal(), n, p, tau, seed++);
        const auto opanel = to_oracle(panel.data);

        const LagMatrix sc = autocov(panel, tau, true);
        CHECK(max_abs_diff(sc.data, oracle::autocov_centered(opanel, n, tau)) < 1e-12);

        const LagMatrix sn = autocov(panel, tau, false);
        CHECK(max_abs_diff(sn.data, oracle::autocov_noncentered(opanel, n, tau)) < 1e-12);

        const LagMatrix rc = autocorr(panel, tau, true);
        CHECK(max_abs_diff(rc.data, oracle::autocorr_oracle(opanel, n, tau, true)) < 1e-12);

        const LagMatrix rn = autocorr(panel, tau, false);
        CHECK(max_abs_diff(rn.data, oracle::autocorr_oracle(opanel, n, tau, false)) < 1e-12);
      }
    }
  }
}

TEST_CASE("centered builder annihilates constant panels") {
  const auto panel = panel_from(Eigen::MatrixXd::Constant(6, 3, 4.2), 6, 0);
  const LagMatrix s = autocov(panel, 1, true);
  CHECK(s.data.array().abs().maxCoeff() == 0.0);
}

TEST_CASE("hand-computed scalar case: n=2, tau=1, non-centered") {
  Eigen::MatrixXd data(3, 1);
  data << 1.0, 1.0, -1.0;
  const auto panel = panel_from(data, 2, 1);
  const LagMatrix s = autocov(panel, 1, false);
  // (1*1 + 1*(-1)) / 2
  CHECK(s.data(0, 0) == 0.0);
  CHECK(s.divisor == 2.0);
}

TEST_CASE("lag-0 auto-correlation has unit diagonal") {
  const auto panel = sample_error_panel(DistributionSpec::student_t(7), 40, 12, 0, 5);
  const LagMatrix r0 = autocorr(panel, 0, true);
  CHECK((r0.data.diagonal().array() - 1.0).abs().maxCoeff() <= 1e-12);
  CHECK(r0.normalized);
  const LagMatrix r0n = autocorr(panel, 0, false);
  CHECK((r0n.data.diagonal().array() - 1.0).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("auto-correlation is exactly invariant under positive column scaling") {
  const auto base = sample_error_panel(DistributionSpec::standard_normal(), 24, 8, 2, 77);
  ErrorPanel scaled = base;
  for (int j = 0; j < 8; ++j) {
    scaled.data.col(j) *= std::pow(10.0, (j % 5) - 2);  // 1e-2 .. 1e2
  }
  for (bool centered : {true, false}) {
    for (int tau : {0, 1, 2}) {
      const LagMatrix r = autocorr(base, tau, centered);
      const LagMatrix rs = autocorr(scaled, tau, centered);
      CHECK((r.data - rs.data).array().abs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("zero-variance column trips the degenerate-input guard") {
  Eigen::MatrixXd data = Eigen::MatrixXd::Random(10, 3);
  data.col(1).setZero();
  const auto panel = panel_from(data, 10, 0);
  CHECK_THROWS_AS(autocorr(panel, 0, false), std::domain_error);
}

TEST_CASE("lag bounds are enforced") {
  const auto panel = sample_error_panel(DistributionSpec::standard_normal(), 10, 3, 1, 9);
  CHECK_THROWS_AS(autocov(panel, 2, false), std::invalid_argument);   // beyond tau_max
  CHECK_THROWS_AS(autocov(panel, 10, true), std::invalid_argument);   // tau >= n
  CHECK_THROWS_AS(autocov(panel, -1, true), std::invalid_argument);
  CHECK_NOTHROW(autocov(panel, 2, true));  // circular wrap needs no extra rows
}

TEST_CASE("sym_product: identity, hand case, triple-loop oracle") {
  LagMatrix id;
  id.data = Eigen::MatrixXd::Identity(3, 3);
  id.lag = 1;
  CHECK(sym_product(id).data.isApprox(Eigen::MatrixXd::Identity(3, 3)));
  CHECK(sym_product(id).source_lag == 1);

  LagMatrix nil;
  nil.data.resize(2, 2);
  nil.data << 0.0, 1.0, 0.0, 0.0;
  const SymProduct np = sym_product(nil);
  CHECK(np.data(0, 0) == 1.0);
  CHECK(np.data(0, 1) == 0.0);
  CHECK(np.data(1, 0) == 0.0);
  CHECK(np.data(1, 1) == 0.0);

  LagMatrix rnd;
  rnd.data = Eigen::MatrixXd::Random(4, 4);
  const SymProduct sp = sym_product(rnd);
  const auto om = oracle::matmul_abt(to_oracle(rnd.data), to_oracle(rnd.data));
  CHECK(max_abs_diff(sp.data, om) < 1e-12);
  CHECK((sp.data - sp.data.transpose()).array().abs().maxCoeff() <=
        1e-12 * sp.data.array().abs().maxCoeff());
}

TEST_CASE("sym_product is positive semidefinite") {
  const auto panel = sample_error_panel(DistributionSpec::centered_uniform(), 30, 20, 1, 3);
  const SymProduct sp = sym_product(autocorr(panel, 1, false));
  const Spectrum spec = sym_eigenvalues(sp.data);
  CHECK(spec.min() >= -1e-8 * spec.max());
}

TEST_CASE("normalized_trace: identity and diagonal cases") {
  SymProduct id;
  id.data = Eigen::MatrixXd::Identity(5, 5);
  CHECK(normalized_trace(id) == 1.0);

  SymProduct d;
  d.data = Eigen::Vector2d(2.0, 4.0).asDiagonal();
  CHECK(normalized_trace(d) == 3.0);
}

TEST_CASE("normalized trace of the non-centered lag-1 product approaches y") {
  const int n = 400, p = 400;
  const auto panel = sample_error_panel(DistributionSpec::standard_normal(), n, p, 1, 404);
  const double t = normalized_trace(sym_product(autocov(panel, 1, false)));
  CHECK(t > 0.93);
  CHECK(t < 1.07);
}

TEST_CASE("rank bound: at least p - n null eigenvalues when p > n") {
  const int n = 60, p = 100;
  const auto panel = sample_error_panel(DistributionSpec::standard_normal(), n, p, 1, 15);
  const SymProduct sp = sym_product(autocorr(panel, 1, false));
  const Spectrum spec = sym_eigenvalues(sp.data);
  int zeros = 0;
  for (double v : spec.values) {
    if (v <= 1e-8 * spec.max()) ++zeros;
  }
  CHECK(zeros >= p - n);
}
