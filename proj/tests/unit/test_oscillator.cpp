#include <doctest.h>

#include <cmath>

#include "cryptospec/core.hpp"
#include "cryptospec/errors.hpp"
#include "cryptospec/oscillator.hpp"

using namespace cryptospec;

namespace {

// (-1)^k (2k-1)!! / (2k)!!
Rational double_factorial_ratio(int k) {
  Rational r = 1;
  for (int i = 1; i <= k; ++i) r *= Rational(2 * i - 1, 2 * i);
  return k % 2 ? Rational(-r) : r;
}

}  // namespace

TEST_CASE("three quantizations of the complexified oscillator") {
  CHECK(osc_spectrum(OscQuantization::real_axis_gauge, 0) == 0.5);
  CHECK(osc_spectrum(OscQuantization::real_axis_gauge, 4) == 4.5);
  CHECK(osc_spectrum(OscQuantization::imag_axis_gauge, 1) == -1.5);
  CHECK(osc_spectrum(OscQuantization::dirac_constraint, -3) == -3.0);
  CHECK(osc_spectrum(OscQuantization::dirac_constraint, 7) == 7.0);
  CHECK_THROWS_AS(osc_spectrum(OscQuantization::real_axis_gauge, -1), DomainError);
  CHECK_THROWS_AS(osc_spectrum(OscQuantization::imag_axis_gauge, -2), DomainError);
}

TEST_CASE("zero-energy kernel coefficients are exact double-factorial ratios") {
  const KernelState s = dirac_kernel_state(0, 40);
  REQUIRE(s.size() == 41);
  for (int k = 0; 2 * k <= 40; ++k) {
    CHECK(s.exact(2 * k) == double_factorial_ratio(k));
    if (2 * k + 1 <= 40) CHECK(s.exact(2 * k + 1) == 0);
  }
  CHECK(s.exact(4) == Rational(3, 8));
  for (int j = 1; j < 40; ++j) CHECK((j + 1) * s.exact(j + 1) + j * s.exact(j - 1) == 0);
  for (int j = 0; j <= 40; ++j) CHECK(s.value(j) == doctest::Approx(static_cast<double>(s.exact(j))).epsilon(1e-14));
}

TEST_CASE("kernel norm diverges logarithmically") {
  const KernelState s = dirac_kernel_state(0, 400);
  for (int k = 4; 2 * k <= 400; ++k) {
    const double c = s.value(2 * k);
    const double w = k * c * c;
    CHECK(w > 0.25);
    CHECK(w < 0.5);
  }
  CHECK(200 * s.value(400) * s.value(400) == doctest::Approx(1.0 / kPi).epsilon(2e-3));
}

TEST_CASE("kernel states of every block") {
  for (int d = -5; d <= 5; ++d) {
    const KernelState s = dirac_kernel_state(d, 30);
    CHECK(s.energy == d);
    CHECK(s.value(0) == doctest::Approx(std::sqrt(std::tgamma(std::abs(d) + 1.0))).epsilon(1e-15));
    for (int j = 1; j <= 30; j += 2) CHECK(s.value(j) == 0.0);
    if (d != 0) CHECK_THROWS_AS((void)s.exact(2), DomainError);
  }
  CHECK_THROWS_AS(dirac_kernel_state(0, 1), DomainError);
}

TEST_CASE("truncated constraint: H eigenvalue d, residual only on the edge") {
  const int N = 14;
  const ConstrainedMatrices mats = build_constrained_matrices(N);
  CHECK(mats.H.rows() == (N + 1) * (N + 1));
  CHECK((mats.G - mats.G.transpose()).norm() == 0.0);
  CHECK(mats.G(mats.index(3, 5), mats.index(2, 4)) == doctest::Approx(std::sqrt(15.0)));
  for (int d = -5; d <= 5; ++d) {
    const KernelState s = dirac_kernel_state(d, N);
    const Eigen::VectorXd v = embed_kernel_state(mats, s);
    CHECK((mats.H * v - d * v).norm() == 0.0);
    const Eigen::VectorXd r = mats.G * v;
    double bulk = 0.0, edge = 0.0;
    for (int n = 0; n <= N; ++n) {
      for (int m = 0; m <= N; ++m) {
        double& slot = std::max(n, m) == N ? edge : bulk;
        slot = std::max(slot, std::abs(r(mats.index(n, m))));
      }
    }
    INFO("d = " << d);
    CHECK(bulk <= 1e-14);
    // when N - |d| is odd the cancelling partner of the last nonzero coefficient is cut off
    if ((N - std::abs(d)) % 2 == 1) CHECK(edge > 1e-3);
  }
  CHECK_THROWS_AS(build_constrained_matrices(1), DomainError);
}
