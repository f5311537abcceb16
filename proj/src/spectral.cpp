#include "cryptospec/spectral.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "cryptospec/errors.hpp"
#include "cryptospec/ode.hpp"
#include "cryptospec/parallel.hpp"
#include "cryptospec/semiclassical.hpp"

namespace cryptospec {

// ---------------------------------------------------------------------------
// Shared spectrum types

Ray Ray::at(double alpha) {
  if (!std::isfinite(alpha) || alpha <= -kPi || alpha > 1.5 * kPi) {
    throw DomainError("Ray: alpha must lie in (-pi, 3pi/2]");
  }
  return {alpha, std::polar(1.0, alpha)};
}

std::string to_string(SectorKind kind) {
  switch (kind) {
    case SectorKind::discrete: return "discrete";
    case SectorKind::continuous: return "continuous";
    case SectorKind::empty: return "empty";
    case SectorKind::boundary: return "boundary";
  }
  return "boundary";
}

std::string SectorClass::name() const {
  if (kind == SectorKind::discrete) return "discrete(" + std::to_string(m) + ")";
  return to_string(kind);
}

std::string to_string(LevelMethod method) {
  return method == LevelMethod::shooting ? "shooting" : "semiclassical";
}

double discrete_wedge_center(int n, int m) {
  const double k = 2.0 * n + 3.0;
  return -(2.0 * n - 1.0) * kPi / (2.0 * k) + 2.0 * kPi * m / k;
}

void ShootingParams::validate() const {
  if (!(s_max >= 0.0) || !std::isfinite(s_max)) throw DomainError("ShootingParams: s_max must be >= 0");
  if (!(ode_tol >= 1e-14 && ode_tol <= 1e-4)) throw DomainError("ShootingParams: ode_tol must lie in [1e-14, 1e-4]");
  if (!(e_grid_step >= 0.0) || !std::isfinite(e_grid_step)) throw DomainError("ShootingParams: e_grid_step must be >= 0");
  if (!(refine_tol > 0.0 && refine_tol <= 1e-8)) throw DomainError("ShootingParams: refine_tol must lie in (0, 1e-8]");
  if (!(wkb_exponent >= 10.0)) throw DomainError("ShootingParams: wkb_exponent must be >= 10");
}

// ---------------------------------------------------------------------------
// Sector classification

namespace {

struct WedgeMap {
  std::vector<double> asymptotes;

  int wedge_of(double beta) const {
    const double b = wrap_angle(beta);
    const int count = static_cast<int>(asymptotes.size());
    for (int i = 0; i + 1 < count; ++i) {
      if (b > asymptotes[i] && b <= asymptotes[i + 1]) return i;
    }
    return count - 1;  // the wedge that wraps through pi
  }

  double distance(double beta) const {
    double best = std::numeric_limits<double>::infinity();
    for (double a : asymptotes) best = std::min(best, std::abs(wrap_angle(beta - a)));
    return best;
  }
};

SectorClass classify_interior(const PotentialSpec& spec, const WedgeMap& map, double alpha) {
  const int count = static_cast<int>(map.asymptotes.size());
  const int a = map.wedge_of(alpha);
  const int b = map.wedge_of(kPi - alpha);
  SectorClass out;
  out.asymptote_distance = std::min(map.distance(alpha), map.distance(kPi - alpha));
  if (a == b) {
    out.kind = SectorKind::continuous;
    return out;
  }
  const int up = ((b - a) % count + count) % count;
  const int down = count - up;
  if (up == 1 || down == 1) {
    out.kind = SectorKind::empty;
    return out;
  }
  int distance = 0;
  if (spec.parity == Parity::odd) {
    // Walk through the wedge containing the negative imaginary axis.
    const int bottom = map.wedge_of(-kPi / 2.0);
    const int from_a_down = ((a - bottom) % count + count) % count;  // steps a -> bottom going down
    distance = from_a_down <= down ? down : up;
  } else {
    distance = std::min(up, down);
  }
  if (distance % 2 != 0) {
    out.kind = SectorKind::boundary;
    return out;
  }
  out.kind = SectorKind::discrete;
  out.m = (distance - 2) / 2;
  return out;
}

}  // namespace

SectorClass classify_ray(const PotentialSpec& spec, double alpha) {
  spec.validate();
  if (!std::isfinite(alpha)) throw DomainError("classify_ray: non-finite alpha");
  const WedgeMap map{stokes_asymptotes(spec)};
  SectorClass out = classify_interior(spec, map, alpha);
  if (out.asymptote_distance >= kAsymptoteCollar) return out;

  // Inside a collar: probe just outside it on both sides.
  const double shift = kAsymptoteCollar + 0.01;
  double nearest = alpha;
  double best = std::numeric_limits<double>::infinity();
  for (double a : map.asymptotes) {
    for (double target : {a, kPi - a}) {
      const double d = std::abs(wrap_angle(alpha - target));
      if (d < best) {
        best = d;
        nearest = alpha - wrap_angle(alpha - target);
      }
    }
  }
  const SectorClass left = classify_interior(spec, map, nearest - shift);
  const SectorClass right = classify_interior(spec, map, nearest + shift);
  const double dist = out.asymptote_distance;
  if (left == right) {
    out = left;
  } else {
    out = SectorClass{SectorKind::boundary, -1, 0.0};
  }
  out.asymptote_distance = dist;
  return out;
}

// ---------------------------------------------------------------------------
// Shooting

double auto_s_max(const PotentialSpec& spec, const Ray& ray, double E, double wkb_exponent) {
  const double target = 2.0 * std::abs(E) + 1.0;
  double s0 = 0.05;
  while (std::abs(eval_potential(spec, s0 * ray.phi)) < target) {
    s0 *= 1.05;
    if (s0 > 1e6) throw NumericalError("auto_s_max: potential does not grow along the ray");
  }
  const cplx phi2 = ray.phi * ray.phi;
  auto re_kappa = [&](double s) { return std::sqrt(2.0 * phi2 * (eval_potential(spec, s * ray.phi) - E)).real(); };
  const double ds = s0 / 200.0;
  double s = s0, acc = 0.0, prev = re_kappa(s0);
  for (long it = 0; acc < wkb_exponent; ++it) {
    if (it > 2'000'000) throw NumericalError("auto_s_max: no decaying branch along the ray");
    const double next = re_kappa(s + ds);
    acc += 0.5 * (prev + next) * ds;
    prev = next;
    s += ds;
  }
  return s;
}

Mismatch shoot(const PotentialSpec& spec, const Ray& ray, double E, const ShootingParams& params) {
  spec.require_odd("shoot");
  params.validate();
  if (!std::isfinite(E)) throw DomainError("shoot: non-finite energy");

  Mismatch out;
  out.s_max = params.s_max > 0.0 ? params.s_max : auto_s_max(spec, ray, E, params.wkb_exponent);
  const cplx phi = ray.phi;
  const cplx phi2 = phi * phi;
  const cplx kappa = std::sqrt(2.0 * phi2 * (eval_potential(spec, out.s_max * phi) - E));
  if (kappa.real() <= 1e-6 * std::abs(kappa)) {
    throw NumericalError("shoot: no decaying branch at s_max (Re kappa <= 0)");
  }

  using Ode = Dop853<4>;
  Ode ode(
      [&](double s, const Ode::State& y) {
        const cplx psi{y[0], y[1]};
        const cplx acc = 2.0 * phi2 * (eval_potential(spec, s * phi) - E) * psi;
        return Ode::State{y[2], y[3], acc.real(), acc.imag()};
      },
      {params.ode_tol, params.ode_tol});

  double s = out.s_max;
  Ode::State y{1.0, 0.0, -kappa.real(), -kappa.imag()};
  constexpr double big = 1e150;
  for (int chunk = 0;; ++chunk) {
    const OdeStatus status =
        ode.run(s, y, 0.0, [&](double, const Ode::State& st, const Ode::State&) { return std::hypot(st[0], st[1]) < big; });
    if (status == OdeStatus::completed) break;
    if (status != OdeStatus::stopped || chunk > 1000) throw NumericalError("shoot: inward integration failed");
    const double scale = 1.0 / std::hypot(y[0], y[1]);
    for (double& v : y) v *= scale;
  }

  out.psi0 = {y[0], y[1]};
  out.dpsi0 = {y[2], y[3]};
  const cplx num = out.dpsi0;
  const cplx den = phi * out.psi0;
  if (std::abs(den) == 0.0) {
    out.ratio = std::copysign(std::numeric_limits<double>::infinity(), num.real());
  } else {
    out.ratio = (num / den).real();
  }
  if (std::abs(den) >= std::abs(num)) {
    out.mode = MismatchMode::ratio;
    out.value = out.ratio;
  } else {
    out.mode = MismatchMode::reciprocal;
    out.value = (den / num).real();
  }
  return out;
}

double shoot_mismatch(const PotentialSpec& spec, const Ray& ray, double E, const ShootingParams& params) {
  return shoot(spec, ray, E, params).value;
}

namespace {

RootScan scan_grid(const PotentialSpec& spec, const Ray& ray, const std::vector<double>& grid,
                   const ShootingParams& params) {
  RootScan out;
  if (grid.size() < 2) return out;
  const std::vector<double> values =
      parallel_map<double>(grid.size(), [&](std::size_t i) { return shoot_mismatch(spec, ray, grid[i], params); });

  auto f = [&](double E) { return shoot_mismatch(spec, ray, E, params); };
  auto tol = [&](double a, double b) { return std::abs(b - a) <= params.refine_tol; };

  std::vector<std::pair<double, double>> brackets;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (values[i] == 0.0) {
      out.roots.push_back(grid[i]);
    } else if (values[i] * values[i + 1] < 0.0) {
      brackets.emplace_back(grid[i], grid[i + 1]);
    }
  }
  if (values.back() == 0.0) out.roots.push_back(grid.back());

  const auto refined = parallel_map<double>(brackets.size(), [&](std::size_t i) {
    auto [a, b] = brackets[i];
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(f, a, b, tol, iters);
    return 0.5 * (r.first + r.second);
  });
  for (std::size_t i = 0; i < refined.size(); ++i) {
    const double v = f(refined[i]);
    if (std::abs(v) > 1e-4) {
      std::ostringstream msg;
      msg << "discarded sign change in [" << brackets[i].first << ", " << brackets[i].second
          << "]: mismatch " << v << " at the refined point";
      out.diagnostics.push_back(msg.str());
      continue;
    }
    out.roots.push_back(refined[i]);
  }
  std::sort(out.roots.begin(), out.roots.end());
  return out;
}

}  // namespace

RootScan scan_roots(const PotentialSpec& spec, const Ray& ray, double E_lo, double E_hi, double step,
                    const ShootingParams& params) {
  if (!(E_hi > E_lo) || !(step > 0.0)) throw DomainError("scan_roots: need E_hi > E_lo and step > 0");
  std::vector<double> grid;
  const auto count = static_cast<std::size_t>(std::ceil((E_hi - E_lo) / step));
  for (std::size_t i = 0; i <= count; ++i) grid.push_back(std::min(E_hi, E_lo + static_cast<double>(i) * step));
  return scan_grid(spec, ray, grid, params);
}

SpectrumResult find_levels(const PotentialSpec& spec, const Ray& ray, double E_max, const ShootingParams& params) {
  spec.require_odd("find_levels");
  params.validate();
  if (!(E_max > 0.0) || !std::isfinite(E_max)) throw DomainError("find_levels: E_max must be positive");

  SpectrumResult out;
  out.spec = spec;
  out.ray = ray;
  out.classification = classify_ray(spec, ray.alpha);
  if (out.classification.kind == SectorKind::boundary) {
    out.diagnostics.emplace_back("boundary-indeterminate ray: alpha lies within the collar of a Stokes asymptote");
    return out;
  }
  if (out.classification.kind != SectorKind::discrete) {
    throw DomainError("find_levels: ray is in a " + to_string(out.classification.kind) + " sector");
  }

  ShootingParams p = params;
  if (p.s_max == 0.0) p.s_max = auto_s_max(spec, ray, E_max, p.wkb_exponent);

  const FamilyId family = FamilyId::pos(out.classification.m);
  const bool have_wkb = spec.is_pure();
  std::vector<double> grid;
  if (p.e_grid_step > 0.0) {
    for (double E = 0.5 * p.e_grid_step; E < E_max; E += p.e_grid_step) grid.push_back(E);
  } else {
    double E = 0.01;
    while (E < E_max) {
      grid.push_back(E);
      double step = 0.02;
      if (have_wkb) {
        const double dS = action_exponent(spec.n) * action(spec, family, E).S / E;
        step = std::min(0.5, 2.0 * kPi / dS / 5.0);
      }
      E += step;
    }
  }
  grid.push_back(E_max);

  RootScan scan = scan_grid(spec, ray, grid, p);
  out.diagnostics = std::move(scan.diagnostics);
  for (std::size_t k = 0; k < scan.roots.size(); ++k) {
    out.levels.push_back({static_cast<int>(k), scan.roots[k], LevelMethod::shooting});
  }

  if (have_wkb) {
    int predicted = 0;
    while (semiclassical_energy(spec, family, predicted) < 0.97 * E_max) ++predicted;
    if (static_cast<int>(out.levels.size()) < predicted) {
      std::ostringstream msg;
      msg << "missed level: semiclassical quantization predicts " << predicted << " levels below "
          << 0.97 * E_max << ", shooting found " << out.levels.size();
      out.diagnostics.push_back(msg.str());
    }
  }
  return out;
}

SectorClass classify_ray_numeric(const PotentialSpec& spec, const Ray& ray, const ShootingParams& params) {
  spec.require_pure("classify_ray_numeric");
  params.validate();
  const SectorClass analytic = classify_ray(spec, ray.alpha);

  double e_probe = 0.0;
  for (int m = 0; m < spec.n; ++m) e_probe = std::max(e_probe, 1.2 * semiclassical_energy(spec, FamilyId::pos(m), 2));

  SectorClass numeric;
  numeric.asymptote_distance = analytic.asymptote_distance;
  constexpr int probes = 40;
  std::vector<double> values;
  try {
    values = parallel_map<double>(probes, [&](std::size_t i) {
      const double E = -e_probe + (static_cast<double>(i) + 0.5) * 2.0 * e_probe / probes;
      return shoot_mismatch(spec, ray, E, params);
    });
  } catch (const NumericalError&) {
    numeric.kind = SectorKind::empty;  // no decaying branch along the ray
  }

  if (!values.empty()) {
    double largest = 0.0;
    int first_change = -1;
    for (int i = 0; i < probes; ++i) {
      largest = std::max(largest, std::abs(values[static_cast<std::size_t>(i)]));
      if (first_change < 0 && i + 1 < probes &&
          values[static_cast<std::size_t>(i)] * values[static_cast<std::size_t>(i + 1)] < 0.0) {
        first_change = i;
      }
    }
    if (largest < 1e-6) {
      numeric.kind = SectorKind::continuous;
    } else if (first_change < 0) {
      numeric.kind = SectorKind::empty;
    } else {
      numeric.kind = SectorKind::discrete;
      // Identify the family from the lowest eigenvalue.
      const double lo = -e_probe + first_change * 2.0 * e_probe / probes;
      const RootScan scan = scan_roots(spec, ray, lo, lo + 4.0 * e_probe / probes, e_probe / probes, params);
      const double e0 = scan.roots.empty() ? lo : scan.roots.front();
      double best = std::numeric_limits<double>::infinity();
      for (int m = 0; m < spec.n; ++m) {
        const double d = std::abs(std::log(std::abs(e0) / semiclassical_energy(spec, FamilyId::pos(m), 0)));
        if (d < best) {
          best = d;
          numeric.m = m;
        }
      }
    }
  }

  if (analytic.kind != SectorKind::boundary && !(analytic == numeric)) {
    throw ConsistencyError("classify_ray_numeric: numeric " + numeric.name() + " disagrees with analytic " +
                           analytic.name() + " at alpha = " + std::to_string(ray.alpha));
  }
  return numeric;
}

}  // namespace cryptospec
