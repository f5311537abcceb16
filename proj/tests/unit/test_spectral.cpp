#include <doctest.h>

#include <cmath>

#include "cryptospec/errors.hpp"
#include "cryptospec/semiclassical.hpp"
#include "cryptospec/spectral.hpp"

using namespace cryptospec;

namespace {

std::vector<double> energies(const SpectrumResult& r) {
  std::vector<double> e;
  for (const Level& l : r.levels) e.push_back(l.E);
  return e;
}

void check_table(const std::vector<double>& got, const std::vector<double>& want, double tol) {
  REQUIRE(got.size() >= want.size());
  for (std::size_t k = 0; k < want.size(); ++k) CHECK(std::abs(got[k] - want[k]) < tol);
}

}  // namespace

TEST_CASE("analytic sector classification") {
  const PotentialSpec s1 = PotentialSpec::pure(1), s2 = PotentialSpec::pure(2);
  CHECK(classify_ray(s1, 0.0) == SectorClass{SectorKind::discrete, 0});
  CHECK(classify_ray(s1, -0.15) == SectorClass{SectorKind::discrete, 0});
  CHECK(classify_ray(s1, -kPi / 2).kind == SectorKind::continuous);
  CHECK(classify_ray(s1, kPi / 2).kind == SectorKind::empty);
  CHECK(classify_ray(s1, -3 * kPi / 10).kind == SectorKind::boundary);
  CHECK(classify_ray(s2, 0.0) == SectorClass{SectorKind::discrete, 1});
  CHECK(classify_ray(s2, -3 * kPi / 14) == SectorClass{SectorKind::discrete, 0});
  CHECK(classify_ray(s2, -kPi / 2).kind == SectorKind::continuous);
  CHECK(classify_ray(s2, kPi / 2).kind == SectorKind::empty);
  CHECK(classify_ray(PotentialSpec::even_power(2), kPi / 6) == SectorClass{SectorKind::discrete, 0});
  CHECK(classify_ray(PotentialSpec::even_power(2), kPi / 2).kind == SectorKind::continuous);
  for (int n = 1; n <= 4; ++n) {
    for (int m = 0; m < n; ++m) {
      CHECK(classify_ray(PotentialSpec::pure(n), discrete_wedge_center(n, m)) == SectorClass{SectorKind::discrete, m});
    }
  }
}

TEST_CASE("classification is invariant under the mirror alpha -> pi - alpha") {
  for (int n = 1; n <= 3; ++n) {
    const PotentialSpec s = PotentialSpec::pure(n);
    for (int i = 0; i < 90; ++i) {
      const double a = -kPi / 2 + kPi * (i + 0.5) / 90;
      CHECK(classify_ray(s, a) == classify_ray(s, kPi - a));
    }
  }
}

TEST_CASE("shooting reproduces the reference eigenvalues") {
  const PotentialSpec s1 = PotentialSpec::pure(1), s2 = PotentialSpec::pure(2);
  check_table(energies(find_levels(s1, Ray::at(0.0), 8.0)), {0.762852, 2.711080, 4.989240, 7.464735}, 2e-6);
  check_table(energies(find_levels(s2, Ray::at(0.0), 9.0)), {0.709936, 2.659756, 5.458235, 8.787720}, 2e-6);
  check_table(energies(find_levels(s2, Ray::at(-3 * kPi / 14), 18.0)), {1.163100, 5.233970, 10.794859, 17.428911},
              2e-6);
}

TEST_CASE("eigenvalues do not depend on the ray within a wedge") {
  const PotentialSpec s = PotentialSpec::pure(1);
  const auto a = energies(find_levels(s, Ray::at(0.0), 5.0));
  const auto b = energies(find_levels(s, Ray::at(-0.15), 5.0));
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) < 1e-8);
}

TEST_CASE("eigenvalues are stable when the cut-off is doubled") {
  const PotentialSpec s = PotentialSpec::pure(1);
  const Ray ray = Ray::at(0.0);
  ShootingParams p;
  p.s_max = auto_s_max(s, ray, 8.0, p.wkb_exponent);
  const auto a = energies(find_levels(s, ray, 8.0, p));
  p.s_max *= 2.0;
  const auto b = energies(find_levels(s, ray, 8.0, p));
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) < 1e-8);
}

TEST_CASE("coupling scaling E(g) = g^(2/(N+2)) E(1)") {
  const auto a = energies(find_levels(PotentialSpec::pure(1), Ray::at(0.0), 5.0));
  const auto b = energies(find_levels(PotentialSpec{1, 2.0, false, Parity::odd}, Ray::at(0.0), 5.0 * std::pow(2.0, 0.4)));
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(b[k] == doctest::Approx(a[k] * std::pow(2.0, 0.4)).epsilon(1e-8));
}

TEST_CASE("the PT-symmetric halves join at the origin") {
  // At an eigenvalue the logarithmic derivative d ln psi / dz at z = 0 is the same whether the
  // decaying solution is continued along the ray or along its mirror, and is purely imaginary.
  const PotentialSpec s = PotentialSpec::pure(1);
  const double E0 = find_levels(s, Ray::at(0.0), 1.5).levels.at(0).E;
  for (double alpha : {0.0, -0.2}) {
    const Mismatch a = shoot(s, Ray::at(alpha), E0);
    const Mismatch b = shoot(s, Ray::at(kPi - alpha), E0);
    const cplx la = a.dpsi0 / (Ray::at(alpha).phi * a.psi0);
    const cplx lb = b.dpsi0 / (Ray::at(kPi - alpha).phi * b.psi0);
    CHECK(std::abs(la.real()) < 1e-7 * std::abs(la));
    CHECK(std::abs(la - lb) < 1e-6 * std::abs(la));
  }
}

TEST_CASE("mismatch is bounded and changes sign at each level") {
  const PotentialSpec s = PotentialSpec::pure(1);
  const Ray ray = Ray::at(0.0);
  for (double E = 0.05; E < 8.0; E += 0.1) CHECK(std::abs(shoot_mismatch(s, ray, E)) <= 1.0 + 1e-12);
  for (double E : {0.762852, 2.711080}) {
    CHECK(shoot_mismatch(s, ray, E - 1e-3) * shoot_mismatch(s, ray, E + 1e-3) < 0.0);
  }
}

TEST_CASE("mixed potential reduces to the oscillator as g -> 0") {
  const PotentialSpec s = PotentialSpec::mixed(1, 1e-3);
  const auto e = energies(find_levels(s, Ray::at(0.0), 4.0));
  REQUIRE(e.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(e[k] - (k + 0.5)) < 1e-3);
  const auto h = energies(find_levels(PotentialSpec::harmonic(), Ray::at(0.0), 4.0));
  REQUIRE(h.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(h[k] - (k + 0.5)) < 1e-8);
}

TEST_CASE("numeric classification agrees with the wedge geometry") {
  const PotentialSpec s = PotentialSpec::pure(1);
  CHECK(classify_ray_numeric(s, Ray::at(0.0)) == SectorClass{SectorKind::discrete, 0});
  CHECK(classify_ray_numeric(s, Ray::at(-kPi / 2)).kind == SectorKind::continuous);
  CHECK(classify_ray_numeric(s, Ray::at(1.2)).kind == SectorKind::empty);
  CHECK(classify_ray_numeric(PotentialSpec::pure(2), Ray::at(-3 * kPi / 14)) == SectorClass{SectorKind::discrete, 0});
}

TEST_CASE("non-discrete rays and bad parameters") {
  const PotentialSpec s = PotentialSpec::pure(1);
  CHECK_THROWS_AS(find_levels(s, Ray::at(-kPi / 2), 5.0), DomainError);
  CHECK_THROWS_AS(find_levels(s, Ray::at(kPi / 2), 5.0), DomainError);
  const SpectrumResult b = find_levels(s, Ray::at(-3 * kPi / 10), 5.0);
  CHECK(b.levels.empty());
  CHECK_FALSE(b.diagnostics.empty());
  CHECK_THROWS_AS(Ray::at(-4.0), DomainError);
  ShootingParams p;
  p.refine_tol = 1e-6;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = {};
  p.s_max = -1.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
}
