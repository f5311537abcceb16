#include "cryptospec/semiclassical.hpp"

#include <algorithm>
#include <cmath>

#include "cryptospec/classical.hpp"
#include "cryptospec/errors.hpp"
#include "cryptospec/quadrature.hpp"

namespace cryptospec {

std::string to_string(ActionMethod method) {
  switch (method) {
    case ActionMethod::closed_form: return "closed_form";
    case ActionMethod::derived: return "derived";
    case ActionMethod::quadrature: return "quadrature";
    case ActionMethod::orbit: return "orbit";
  }
  return "closed_form";
}

double action_exponent(int n) { return (2.0 * n + 3.0) / (4.0 * n + 2.0); }

ActionResult action_closed_form(int n, FamilyId family, double E) {
  if (n != 1 && n != 2) {
    throw UnsupportedError("action_closed_form: closed forms exist for n = 1, 2 only; use action_numeric");
  }
  const PotentialSpec spec = PotentialSpec::pure(n);
  validate_family(spec, family, E);
  const double a = std::abs(E);
  const bool pos = family.sign == EnergySign::positive;
  double S = 0.0;
  if (n == 1) {
    const double ratio = std::tgamma(4.0 / 3.0) / std::tgamma(11.0 / 6.0);
    const double scale = std::pow(a, 5.0 / 6.0) * ratio;
    S = pos ? std::sqrt(6.0 * kPi) * scale : 3.0 * std::sqrt(2.0 * kPi) * scale;
  } else {
    const double base = 2.0 * std::sqrt(2.0 * kPi) * std::tgamma(1.2) / std::tgamma(1.7) * std::pow(a, 0.7);
    const double s1 = std::sin(kPi / 10.0), s3 = std::sin(3.0 * kPi / 10.0);
    double factor = 0.0;
    if (pos) {
      factor = family.m == 1 ? std::cos(kPi / 10.0) : std::cos(3.0 * kPi / 10.0);
    } else {
      factor = family.m == 0 ? 1.0 + 2.0 * s3 + s1 : 1.0 + s3;
    }
    S = base * factor;
  }
  return {spec, family, E, S, ActionMethod::closed_form};
}

ActionResult action_derived(const PotentialSpec& spec, FamilyId family, double E) {
  const FamilyGeometry geo = family_geometry(spec, family, E);
  const double r = std::pow(std::abs(E) / spec.g, 1.0 / spec.power());
  const double S = 4.0 * r * std::sqrt(2.0 * std::abs(E)) * unit_segment_integral(spec.n) * geo.factor;
  return {spec, family, E, S, ActionMethod::derived};
}

namespace {

double segment_distance(cplx point, cplx end) {
  const double len2 = std::norm(end);
  const double t = std::clamp((point * std::conj(end)).real() / len2, 0.0, 1.0);
  return std::abs(point - t * end);
}

}  // namespace

ActionResult action_numeric(const PotentialSpec& spec, FamilyId family, double E, int nodes) {
  const FamilyGeometry geo = family_geometry(spec, family, E);
  const TurningPointSet tps = turning_points(spec, E);
  const GaussRule rule = gauss_jacobi(nodes, 0.5, 0.0);

  // Sort nodes by s so the square-root branch can be continued from s = 0.
  std::vector<std::size_t> order(rule.nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rule.nodes[a] < rule.nodes[b]; });

  double total = 0.0;
  for (const ContourPiece& piece : geo.pieces) {
    const double scale = std::abs(piece.point);
    for (cplx b : tps.points) {
      if (std::abs(b - piece.point) <= 1e-9 * scale) continue;
      if (segment_distance(b, piece.point) <= 1e-12 * (1.0 + scale)) {
        throw NumericalError("action_numeric: contour passes through a branch point");
      }
    }
    cplx prev = std::sqrt(cplx{2.0 * E, 0.0});
    cplx integral{0.0, 0.0};
    for (std::size_t idx : order) {
      const double s = 0.5 * (rule.nodes[idx] + 1.0);
      const cplx z = s * piece.point;
      cplx w = std::sqrt(2.0 * (E - eval_potential(spec, z)));
      if (std::abs(w + prev) < std::abs(w - prev)) w = -w;
      prev = w;
      integral += rule.weights[idx] * piece.point * w / std::sqrt(1.0 - s);
    }
    integral *= std::pow(2.0, -1.5);
    total += 2.0 * piece.multiplicity * std::abs(integral.real());
  }
  return {spec, family, E, total, ActionMethod::quadrature};
}

ActionResult action_along_orbit(const PotentialSpec& spec, FamilyId family, double E, double tol) {
  const Trajectory traj = stem_trajectory(spec, E, family, tol);
  if (traj.classification.kind != OrbitKind::closed) {
    throw NumericalError("action_along_orbit: stem orbit did not close (" + traj.classification.diagnostic + ")");
  }
  return {spec, family, E, traj.action, ActionMethod::orbit};
}

ActionResult action(const PotentialSpec& spec, FamilyId family, double E) {
  if (spec.n <= 2 && spec.g == 1.0 && spec.is_pure()) return action_closed_form(spec.n, family, E);
  return action_derived(spec, family, E);
}

double semiclassical_energy(const PotentialSpec& spec, FamilyId family, int k) {
  if (k < 0) throw DomainError("semiclassical_energy: k must be >= 0");
  const double s1 = action(spec, family, family.sign_value()).S;
  return family.sign_value() * std::pow(kPi * (2.0 * k + 1.0) / s1, 1.0 / action_exponent(spec.n));
}

SpectrumResult semiclassical_levels(const PotentialSpec& spec, FamilyId family, int k_max) {
  if (k_max < 0) throw DomainError("semiclassical_levels: k_max must be >= 0");
  validate_family(spec, family, family.sign_value());

  SpectrumResult out;
  out.spec = spec;
  out.ray = Ray::at(discrete_wedge_center(spec.n, family.m));
  out.classification = {SectorKind::discrete, family.m, 0.0};
  for (int k = 0; k <= k_max; ++k) {
    out.levels.push_back({k, semiclassical_energy(spec, family, k), LevelMethod::semiclassical});
  }
  if (family.sign == EnergySign::negative) {
    std::reverse(out.levels.begin(), out.levels.end());
    out.prediction_only = true;
    out.diagnostics.emplace_back("negative-energy family: no boundary problem is known; levels are predictions only");
  }
  return out;
}

}  // namespace cryptospec
