#include <doctest.h>

#include <cmath>

#include "cryptospec/errors.hpp"
#include "cryptospec/flow.hpp"

using namespace cryptospec;

namespace {

const double kDownRay = -3 * kPi / 14;

std::vector<double> mixed_levels(double g, double alpha, double e_max) {
  std::vector<double> e;
  for (const Level& l : find_levels(PotentialSpec::mixed(2, g), Ray::at(alpha), e_max).levels) e.push_back(l.E);
  return e;
}

}  // namespace

TEST_CASE("ground state follows second-order perturbation theory") {
  std::vector<double> residual;
  for (double g : {0.005, 0.01, 0.02}) {
    const double e0 = mixed_levels(g, 0.0, 1.0).at(0);
    residual.push_back(std::abs(e0 - perturbative_E0(g)));
  }
  CHECK(residual[1] <= 1e-3);
  const double slope = std::log(residual[2] / residual[0]) / std::log(4.0);
  CHECK(slope == doctest::Approx(4.0).epsilon(0.25));
  CHECK(perturbative_E0(0.0) == 0.5);
}

TEST_CASE("flow on the real axis: ground state decreases toward 1/2") {
  const FlowCurve c = spectral_flow(2, 0.0, 0.1, 0.01, 3);
  REQUIRE(c.g_values.size() > 10);
  CHECK(c.coalescences.empty());
  double prev = c.energy_of(0, 0);
  for (std::size_t i = 1; i < c.g_values.size(); ++i) {
    CHECK(c.g_values[i] < c.g_values[i - 1]);
    const double e = c.energy_of(i, 0);
    CHECK(e < prev);
    CHECK(e > 0.5);
    prev = e;
  }
  CHECK(prev - 0.5 < 2e-3);
  // pairing is injective
  for (const auto& row : c.links) {
    std::vector<int> seen;
    for (int j : row) {
      if (j < 0) continue;
      CHECK(std::find(seen.begin(), seen.end(), j) == seen.end());
      seen.push_back(j);
    }
  }
}

TEST_CASE("lower wedge: the two lowest levels approach each other") {
  const auto a = mixed_levels(0.08, kDownRay, 2.0);
  const auto b = mixed_levels(0.04, kDownRay, 2.0);
  REQUIRE(a.size() >= 2);
  REQUIRE(b.size() >= 2);
  CHECK(b[1] - b[0] < a[1] - a[0]);
  // below the first exceptional point the lowest surviving level sits near the oscillator ground state
  const auto c = mixed_levels(0.01, kDownRay, 2.0);
  REQUIRE_FALSE(c.empty());
  CHECK(std::abs(c[0] - 0.46) < 0.02);
}

TEST_CASE("first exceptional point") {
  const ExceptionalPoint ep = find_exceptional_point(2, kDownRay, {0, 1}, {0.02, 0.06});
  CHECK(std::abs(ep.g_star - 0.03717) < 5e-4);
  CHECK(std::abs(ep.E_star - 0.484) < 5e-3);
  CHECK(ep.g_hi - ep.g_lo <= 1e-5 * ep.g_star * 1.0001);
  CHECK_FALSE(ep.extrapolation);
  // dichotomy: two levels in the window just above g*, none just below
  const auto above = mixed_levels(ep.g_star * 1.02, kDownRay, 1.0);
  const auto below = mixed_levels(ep.g_star * 0.98, kDownRay, 1.0);
  auto count_near = [&](const std::vector<double>& e) {
    return std::count_if(e.begin(), e.end(), [&](double x) { return std::abs(x - ep.E_star) < 0.1; });
  };
  CHECK(count_near(above) == 2);
  CHECK(count_near(below) == 0);
}

TEST_CASE("exceptional point arguments") {
  CHECK_THROWS_AS(find_exceptional_point(2, kDownRay, {0, 2}, {0.02, 0.06}), DomainError);
  CHECK_THROWS_AS(find_exceptional_point(2, kDownRay, {0, 1}, {0.06, 0.02}), DomainError);
  CHECK_THROWS_AS(spectral_flow(2, kDownRay, 0.01, 0.1, 3), DomainError);
  CHECK_THROWS_AS(spectral_flow(2, -kPi / 2, 0.1, 0.01, 3), DomainError);
}
