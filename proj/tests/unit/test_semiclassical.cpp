#include <doctest.h>

#include <cmath>

#include "cryptospec/errors.hpp"
#include "cryptospec/semiclassical.hpp"

using namespace cryptospec;

namespace {

// Gamma-function actions written out independently of the library.
double oracle_action(int n, FamilyId f, double E) {
  const double a = std::abs(E);
  if (n == 1) {
    const double base = std::tgamma(4.0 / 3.0) / std::tgamma(11.0 / 6.0) * std::pow(a, 5.0 / 6.0);
    return f.sign == EnergySign::positive ? std::sqrt(6.0 * kPi) * base : 3.0 * std::sqrt(2.0 * kPi) * base;
  }
  const double base = 2.0 * std::sqrt(2.0 * kPi) * std::tgamma(1.2) / std::tgamma(1.7) * std::pow(a, 0.7);
  const double s1 = std::sin(kPi / 10), s3 = std::sin(3 * kPi / 10);
  if (f == FamilyId::pos(1)) return base * std::cos(kPi / 10);
  if (f == FamilyId::pos(0)) return base * std::cos(3 * kPi / 10);
  if (f == FamilyId::neg(0)) return base * (1 + 2 * s3 + s1);
  return base * (1 + s3);
}

std::vector<std::pair<int, FamilyId>> low_families() {
  return {{1, FamilyId::pos(0)}, {1, FamilyId::neg(0)}, {2, FamilyId::pos(0)},
          {2, FamilyId::pos(1)}, {2, FamilyId::neg(0)}, {2, FamilyId::neg(1)}};
}

}  // namespace

TEST_CASE("closed forms match the Gamma-function oracle") {
  for (auto [n, f] : low_families()) {
    for (double e : {0.5, 1.0, 64.0}) {
      const double E = f.sign_value() * e;
      CHECK(action_closed_form(n, f, E).S == doctest::Approx(oracle_action(n, f, E)).epsilon(1e-13));
    }
  }
  CHECK(action_closed_form(1, FamilyId::pos(0), 1.0).S == doctest::Approx(4.1215568).epsilon(1e-7));
}

TEST_CASE("negative to positive cubic action ratio is sqrt 3") {
  for (double e : {0.1, 1.0, 7.5, 64.0}) {
    const double r = action_closed_form(1, FamilyId::neg(0), -e).S / action_closed_form(1, FamilyId::pos(0), e).S;
    CHECK(std::abs(r - std::sqrt(3.0)) < 1e-10);
  }
}

TEST_CASE("quadrature and family-factor actions agree with the closed forms") {
  for (auto [n, f] : low_families()) {
    const PotentialSpec s = PotentialSpec::pure(n);
    for (double e : {1.0, 64.0}) {
      const double E = f.sign_value() * e;
      const double exact = action_closed_form(n, f, E).S;
      INFO("n=" << n << " " << f.name() << " E=" << E);
      CHECK(std::abs(action_numeric(s, f, E).S - exact) <= 1e-10 * exact);
      CHECK(std::abs(action_derived(s, f, E).S - exact) <= 1e-12 * exact);
    }
  }
}

TEST_CASE("action scaling S(E) = S(1) |E|^((2n+3)/(4n+2))") {
  for (int n = 1; n <= 4; ++n) {
    const PotentialSpec s = PotentialSpec::pure(n);
    const double p = action_exponent(n);
    CHECK(p == doctest::Approx((2.0 * n + 3.0) / (4.0 * n + 2.0)));
    for (int m = 0; m < n; ++m) {
      for (FamilyId f : {FamilyId::pos(m), FamilyId::neg(m)}) {
        const double s1 = action_numeric(s, f, f.sign_value()).S;
        CHECK(s1 > 0.0);
        for (double e : {0.01, 3.0, 200.0}) {
          const double se = action_numeric(s, f, f.sign_value() * e).S;
          CHECK(std::abs(se - s1 * std::pow(e, p)) <= 1e-9 * se);
        }
        CHECK(std::abs(action_derived(s, f, f.sign_value()).S - s1) <= 1e-10 * s1);
      }
    }
  }
}

TEST_CASE("actions along integrated orbits") {
  const double pos = action_along_orbit(PotentialSpec::pure(1), FamilyId::pos(0), 64.0).S;
  const double neg = action_along_orbit(PotentialSpec::pure(1), FamilyId::neg(0), -64.0).S;
  CHECK(pos == doctest::Approx(action_closed_form(1, FamilyId::pos(0), 64.0).S).epsilon(1e-9));
  CHECK(neg == doctest::Approx(228.43986627068).epsilon(1e-9));
  CHECK(neg / pos == doctest::Approx(std::sqrt(3.0)).epsilon(1e-8));
}

TEST_CASE("Bohr-Sommerfeld levels") {
  const SpectrumResult t1 = semiclassical_levels(PotentialSpec::pure(1), FamilyId::pos(0), 3);
  const std::vector<double> table1{0.721949, 2.698061, 4.980470, 7.458027};
  REQUIRE(t1.levels.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) CHECK(t1.levels[k].E == doctest::Approx(table1[k]).epsilon(1e-6));

  const PotentialSpec s2 = PotentialSpec::pure(2);
  const std::vector<double> table2{0.543, 2.608, 5.410, 8.750};
  const std::vector<double> table3{1.080, 5.186, 10.759, 17.400};
  const SpectrumResult up = semiclassical_levels(s2, FamilyId::pos(1), 3);
  const SpectrumResult down = semiclassical_levels(s2, FamilyId::pos(0), 3);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(std::abs(up.levels[k].E - table2[k]) < 1e-3);
    CHECK(std::abs(down.levels[k].E - table3[k]) < 1e-3);
  }

  // inverting the quantisation condition recovers S = pi (2k + 1)
  for (int n = 1; n <= 3; ++n) {
    const PotentialSpec s = PotentialSpec::pure(n);
    for (int k = 0; k < 5; ++k) {
      const double E = semiclassical_energy(s, FamilyId::pos(n - 1), k);
      CHECK(action(s, FamilyId::pos(n - 1), E).S == doctest::Approx(kPi * (2 * k + 1)).epsilon(1e-12));
    }
  }

  const SpectrumResult neg = semiclassical_levels(PotentialSpec::pure(1), FamilyId::neg(0), 2);
  CHECK(neg.prediction_only);
  REQUIRE(neg.levels.size() == 3);
  CHECK(neg.levels[0].E < neg.levels[1].E);
  CHECK(neg.levels[2].E < 0.0);
}

TEST_CASE("action errors") {
  CHECK_THROWS_AS(action_closed_form(3, FamilyId::pos(0), 1.0), UnsupportedError);
  CHECK_THROWS_AS(action_closed_form(1, FamilyId::pos(0), -1.0), DomainError);
  CHECK_THROWS_AS(action_numeric(PotentialSpec::mixed(1, 0.2), FamilyId::pos(0), 1.0), DomainError);
  CHECK_THROWS_AS(action_numeric(PotentialSpec::pure(1), FamilyId::pos(1), 1.0), DomainError);
}
