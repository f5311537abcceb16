#include "cryptospec/core.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "cryptospec/errors.hpp"

namespace cryptospec {

namespace {

void require_finite(cplx z, const char* what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError(std::string(what) + ": non-finite argument");
  }
}

// Roots of V(z) - E for the oscillator-augmented potential from the companion matrix.
TurningPointSet polynomial_turning_points(const PotentialSpec& spec, double E) {
  const int k = spec.g > 0.0 ? spec.power() : 2;
  std::vector<cplx> coeff(static_cast<std::size_t>(k) + 1, 0.0);  // coeff[i] multiplies z^i
  coeff[0] = -E;
  coeff[2] += 0.5;
  if (spec.g > 0.0) coeff[static_cast<std::size_t>(k)] += -spec.g * ipow(cplx{0.0, 1.0}, k);
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(k, k);
  for (int i = 1; i < k; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < k; ++i) companion(i, k - 1) = -coeff[static_cast<std::size_t>(i)] / coeff.back();
  const Eigen::VectorXcd roots = Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(companion, false).eigenvalues();

  TurningPointSet out;
  out.energy = E;
  for (int i = 0; i < k; ++i) {
    cplx z = roots(i);
    for (int it = 0; it < 3; ++it) {
      const cplx d = potential_derivative(spec, z);
      if (d == 0.0) break;
      z -= (eval_potential(spec, z) - E) / d;
    }
    out.points.push_back(z);
  }
  std::sort(out.points.begin(), out.points.end(), [](cplx a, cplx b) { return std::arg(a) < std::arg(b); });
  return out;
}

}  // namespace

void PotentialSpec::validate() const {
  if (n < 1) throw DomainError("PotentialSpec: n must be >= 1");
  if (!std::isfinite(g) || g < 0.0) throw DomainError("PotentialSpec: g must be finite and non-negative");
  if (!oscillator && g == 0.0) throw DomainError("PotentialSpec: pure potential needs g > 0");
}

void PotentialSpec::require_odd(std::string_view operation) const {
  validate();
  if (parity != Parity::odd) {
    throw DomainError(std::string(operation) + ": even parity supports sector classification only");
  }
}

void PotentialSpec::require_pure(std::string_view operation) const {
  validate();
  if (oscillator) throw DomainError(std::string(operation) + ": requires the pure potential");
}

bool PhasePoint::finite() const {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(p) && std::isfinite(q);
}

double PhasePoint::norm() const { return std::sqrt(x * x + y * y + p * p + q * q); }

double distance(const PhasePoint& a, const PhasePoint& b) {
  return PhasePoint{a.x - b.x, a.y - b.y, a.p - b.p, a.q - b.q}.norm();
}

cplx ipow(cplx w, int k) {
  cplx r{1.0, 0.0};
  for (int i = 0; i < k; ++i) r *= w;
  return r;
}

cplx eval_potential(const PotentialSpec& spec, cplx z) {
  require_finite(z, "eval_potential");
  const cplx iz{-z.imag(), z.real()};
  cplx v = -spec.g * ipow(iz, spec.power());
  if (spec.oscillator) v += 0.5 * z * z;
  return v;
}

cplx potential_derivative(const PotentialSpec& spec, cplx z) {
  require_finite(z, "potential_derivative");
  const int k = spec.power();
  const cplx iz{-z.imag(), z.real()};
  cplx d = -spec.g * static_cast<double>(k) * cplx{0.0, 1.0} * ipow(iz, k - 1);
  if (spec.oscillator) d += z;
  return d;
}

HGValue split_hg(const PotentialSpec& spec, const PhasePoint& pt) {
  if (!pt.finite()) throw DomainError("split_hg: non-finite phase point");
  const cplx pi = pt.pi();
  const cplx h = 0.5 * pi * pi + eval_potential(spec, pt.z());
  return {h.real(), h.imag()};
}

// With V'(z) = a + ib:  dp/dt = -dH/dx = -a,  dq/dt = -dH/dy = b.
PhasePoint hamilton_field(const PotentialSpec& spec, const PhasePoint& pt) {
  const cplx dv = potential_derivative(spec, pt.z());
  return {pt.p, -pt.q, -dv.real(), dv.imag()};
}

PhasePoint constraint_field(const PotentialSpec& spec, const PhasePoint& pt) {
  const cplx dv = potential_derivative(spec, pt.z());
  return {-pt.q, -pt.p, -dv.imag(), -dv.real()};
}

TurningPointSet turning_points(const PotentialSpec& spec, double E) {
  spec.validate();
  spec.require_odd("turning_points");
  if (!std::isfinite(E)) throw DomainError("turning_points: non-finite energy");
  if (!spec.is_pure()) return polynomial_turning_points(spec, E);
  if (E == 0.0) throw DegenerateError("turning_points: E = 0 collapses all turning points to the origin");

  const int k = spec.power();
  const double radius = std::pow(std::abs(E) / spec.g, 1.0 / k);
  // (iz)^k = -E/g, whose argument is pi for E > 0 and 0 for E < 0.
  const double base = E > 0.0 ? kPi : 0.0;

  TurningPointSet out;
  out.energy = E;
  out.points.reserve(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    const double arg_w = (base + 2.0 * kPi * j) / k;
    cplx z = std::polar(radius, arg_w - kPi / 2.0);
    for (int it = 0; it < 3; ++it) {
      const cplx step = (eval_potential(spec, z) - E) / potential_derivative(spec, z);
      z -= step;
      if (std::abs(step) <= 1e-16 * radius) break;
    }
    out.points.push_back(z);
  }
  std::sort(out.points.begin(), out.points.end(),
            [](cplx a, cplx b) { return std::arg(a) < std::arg(b); });
  return out;
}

double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

std::vector<double> stokes_asymptotes(const PotentialSpec& spec) {
  spec.validate();
  const int k = spec.leading_power();
  // Leading term c z^k; the asymptotes solve arg(c) + (k+2) alpha = pi (mod 2 pi).
  const double arg_c = spec.g > 0.0 ? std::arg(-spec.g * ipow(cplx{0.0, 1.0}, k)) : 0.0;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(k + 2));
  for (int j = 0; j < k + 2; ++j) {
    out.push_back(wrap_angle((kPi - arg_c) / (k + 2) + 2.0 * kPi * j / (k + 2)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

double wedge_half_width(const PotentialSpec& spec) { return kPi / (spec.leading_power() + 2); }

FamilyId FamilyId::parse(std::string_view text, int n) {
  const auto dash = text.find('-');
  if (dash == std::string_view::npos) throw DomainError("FamilyId: expected pos-<m> or neg-<m>");
  const std::string_view head = text.substr(0, dash);
  const std::string_view tail = text.substr(dash + 1);
  FamilyId id;
  if (head == "pos") {
    id.sign = EnergySign::positive;
  } else if (head == "neg") {
    id.sign = EnergySign::negative;
  } else {
    throw DomainError("FamilyId: unknown sign '" + std::string(head) + "'");
  }
  if (tail == "up" || tail == "down") {
    if (n != 2) throw DomainError("FamilyId: up/down names exist only for n = 2");
    const bool up = tail == "up";
    id.m = (id.sign == EnergySign::positive) == up ? 1 : 0;
    return id;
  }
  try {
    std::size_t used = 0;
    id.m = std::stoi(std::string(tail), &used);
    if (used != tail.size()) throw DomainError("FamilyId: trailing characters");
  } catch (const std::logic_error&) {
    throw DomainError("FamilyId: bad index '" + std::string(tail) + "'");
  }
  if (id.m < 0 || id.m >= n) throw DomainError("FamilyId: index " + std::to_string(id.m) + " outside 0..n-1");
  return id;
}

std::string FamilyId::name() const {
  return std::string(sign == EnergySign::positive ? "pos-" : "neg-") + std::to_string(m);
}

void validate_family(const PotentialSpec& spec, FamilyId family, double E) {
  spec.require_odd("family");
  spec.require_pure("family");
  if (family.m < 0 || family.m >= spec.n) {
    throw DomainError("family " + family.name() + " out of range for n = " + std::to_string(spec.n));
  }
  if (!std::isfinite(E) || E == 0.0) throw DomainError("family: energy must be finite and non-zero");
  if ((E > 0.0) != (family.sign == EnergySign::positive)) {
    throw DomainError("family " + family.name() + " is inconsistent with the sign of E");
  }
}

namespace {

// Argument of the right turning point of the m-th pair.
double right_angle(int n, FamilyId family, int m) {
  const int k = 2 * n + 1;
  if (family.sign == EnergySign::positive) return kPi * (2 * m + 1) / k - kPi / 2.0;
  return 2.0 * kPi * (m + 1) / k - kPi / 2.0;
}

cplx nearest(const TurningPointSet& tps, double angle, double radius) {
  const cplx target = std::polar(radius, angle);
  return *std::min_element(tps.points.begin(), tps.points.end(),
                           [&](cplx a, cplx b) { return std::abs(a - target) < std::abs(b - target); });
}

}  // namespace

FamilyGeometry family_geometry(const PotentialSpec& spec, FamilyId family, double E) {
  validate_family(spec, family, E);
  const int n = spec.n;
  const double radius = std::pow(std::abs(E) / spec.g, 1.0 / (2 * n + 1));
  const TurningPointSet tps = turning_points(spec, E);

  FamilyGeometry geo;
  geo.family = family;
  geo.energy = E;
  const double theta = right_angle(n, family, family.m);
  geo.right = nearest(tps, theta, radius);
  geo.left = nearest(tps, kPi - theta, radius);
  geo.pieces.push_back({geo.right, 1});
  geo.pieces.push_back({geo.left, 1});

  if (family.sign == EnergySign::positive) {
    geo.factor = std::cos(theta);
    return geo;
  }

  // The contour of a negative-energy orbit wraps the cuts of the bottom turning point
  // and of every pair lying further from the real axis.
  geo.factor = std::abs(std::sin(theta)) + 1.0;
  geo.pieces.push_back({nearest(tps, -kPi / 2.0, radius), 2});
  for (int j = 0; j < n; ++j) {
    const double th = right_angle(n, family, j);
    if (std::abs(th) > std::abs(theta) + 1e-12) {
      geo.factor += 2.0 * std::abs(std::sin(th));
      geo.pieces.push_back({nearest(tps, th, radius), 2});
      geo.pieces.push_back({nearest(tps, kPi - th, radius), 2});
    }
  }
  return geo;
}

double unit_segment_integral(int n) {
  const double a = 1.0 / (2 * n + 1);
  return std::sqrt(kPi) * std::tgamma(1.0 + a) / (2.0 * std::tgamma(1.5 + a));
}

double family_period(const PotentialSpec& spec, FamilyId family, double E) {
  const FamilyGeometry geo = family_geometry(spec, family, E);
  const int n = spec.n;
  const double radius = std::pow(std::abs(E) / spec.g, 1.0 / (2 * n + 1));
  const double action = 4.0 * radius * std::sqrt(2.0 * std::abs(E)) * unit_segment_integral(n) * geo.factor;
  return (2.0 * n + 3.0) / (4.0 * n + 2.0) * action / std::abs(E);
}

}  // namespace cryptospec
