#include "cryptospec/classical.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "cryptospec/errors.hpp"
#include "cryptospec/ode.hpp"

namespace cryptospec {

namespace {

using Ode5 = Dop853<5>;
using State5 = Ode5::State;

PhasePoint to_point(const State5& s) { return {s[0], s[1], s[2], s[3]}; }

State5 orbit_rhs(const PotentialSpec& spec, const State5& s) {
  const PhasePoint f = hamilton_field(spec, to_point(s));
  return {f.x, f.y, f.p, f.q, s[2] * s[2] - s[3] * s[3]};
}

// (pt - pt0) . f: negative while approaching the start, positive while leaving it.
double approach_rate(const State5& s, const State5& f, const PhasePoint& start) {
  return (s[0] - start.x) * f[0] + (s[1] - start.y) * f[1] + (s[2] - start.p) * f[2] + (s[3] - start.q) * f[3];
}

void check_tol(double tol) {
  if (!(tol >= 1e-13 && tol <= 1e-6)) throw DomainError("integrate: tol must lie in [1e-13, 1e-6]");
}

}  // namespace

std::string to_string(OrbitKind kind) {
  switch (kind) {
    case OrbitKind::closed: return "closed";
    case OrbitKind::runaway: return "runaway";
    case OrbitKind::undetermined: return "undetermined";
  }
  return "undetermined";
}

double default_escape_radius(const PotentialSpec& spec, double E) {
  return 50.0 * std::pow(1.0 + std::abs(E), 1.0 / spec.leading_power());
}

Trajectory integrate(const PotentialSpec& spec, const PhasePoint& start, double t_max, double tol,
                     const IntegrateOptions& options) {
  spec.require_odd("integrate");
  if (!start.finite()) throw DomainError("integrate: non-finite start");
  if (!std::isfinite(t_max) || t_max <= 0.0) throw DomainError("integrate: t_max must be positive");
  check_tol(tol);

  Trajectory traj;
  traj.spec = spec;
  const HGValue hg0 = split_hg(spec, start);
  traj.energy = hg0.H;
  traj.constraint0 = hg0.G;
  traj.samples.push_back({0.0, start});

  const double radius = options.escape_radius > 0.0 ? options.escape_radius : default_escape_radius(spec, hg0.H);
  const double close_tol = 1e-6 * (1.0 + start.norm());
  const double depart_tol = 1e3 * close_tol;

  Ode5 ode([&spec](double, const State5& s) { return orbit_rhs(spec, s); }, {tol, tol});

  auto record = [&](double t, const State5& s) {
    const PhasePoint pt = to_point(s);
    const HGValue hg = split_hg(spec, pt);
    traj.samples.push_back({t, pt});
    traj.max_energy_drift = std::max(traj.max_energy_drift, std::abs(hg.H - traj.energy));
    traj.max_constraint_drift = std::max(traj.max_constraint_drift, std::abs(hg.G - traj.constraint0));
  };

  bool departed = false;
  double t_prev = 0.0;
  State5 y_prev{start.x, start.y, start.p, start.q, 0.0};
  State5 f_prev = orbit_rhs(spec, y_prev);
  double rate_prev = 0.0;

  double t = 0.0;
  State5 y = y_prev;
  const OdeStatus status = ode.run(t, y, t_max, [&](double tn, const State5& yn, const State5& fn) {
    const PhasePoint pt = to_point(yn);
    if (!pt.finite() || std::hypot(pt.x, pt.y) > radius) {
      record(tn, yn);
      traj.classification = {OrbitKind::runaway, tn, "left the escape radius " + std::to_string(radius)};
      traj.action = std::abs(yn[4]);
      return false;
    }
    const double rate = approach_rate(yn, fn, start);
    const double dist = distance(pt, start);
    if (!departed && dist > depart_tol) departed = true;

    if (options.detect_closure && departed && tn >= options.min_return_time && rate_prev < 0.0 && rate >= 0.0) {
      // A local minimum of the distance to the start lies inside the last step; locate it.
      double lo = 0.0, hi = tn - t_prev;
      for (int it = 0; it < 80 && hi - lo > 1e-15 * (1.0 + tn); ++it) {
        const double mid = 0.5 * (lo + hi);
        const State5 ym = ode.advance(t_prev, y_prev, f_prev, mid);
        if (approach_rate(ym, orbit_rhs(spec, ym), start) < 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      const double t_min = t_prev + 0.5 * (lo + hi);
      const State5 y_min = ode.advance(t_prev, y_prev, f_prev, 0.5 * (lo + hi));
      if (distance(to_point(y_min), start) <= close_tol) {
        record(t_min, y_min);
        traj.classification = {OrbitKind::closed, t_min, ""};
        traj.action = std::abs(y_min[4]);
        return false;
      }
    }
    record(tn, yn);
    t_prev = tn;
    y_prev = yn;
    f_prev = fn;
    rate_prev = rate;
    return true;
  });

  if (status == OdeStatus::stopped) return traj;
  traj.action = std::abs(y[4]);
  switch (status) {
    case OdeStatus::step_underflow:
      traj.classification = {OrbitKind::undetermined, t, "step size underflow at t = " + std::to_string(t)};
      break;
    case OdeStatus::too_many_steps:
      traj.classification = {OrbitKind::undetermined, t, "step budget exhausted at t = " + std::to_string(t)};
      break;
    default:
      traj.classification = {OrbitKind::undetermined, t_max, "neither closed nor escaped before t_max"};
      break;
  }
  return traj;
}

PhasePoint stem_start(const PotentialSpec& spec, double E, FamilyId family) {
  const FamilyGeometry geo = family_geometry(spec, family, E);
  return {geo.right.real(), geo.right.imag(), 0.0, 0.0};
}

Trajectory stem_trajectory(const PotentialSpec& spec, double E, FamilyId family, double tol) {
  const PhasePoint start = stem_start(spec, E, family);
  const double period = family_period(spec, family, E);
  IntegrateOptions opt;
  opt.min_return_time = 0.5 * period;
  return integrate(spec, start, 3.0 * period, tol, opt);
}

PhasePoint gauge_flow(const PotentialSpec& spec, const PhasePoint& pt, double alpha, double tol) {
  spec.require_odd("gauge_flow");
  if (!pt.finite()) throw DomainError("gauge_flow: non-finite phase point");
  if (!std::isfinite(alpha)) throw DomainError("gauge_flow: non-finite alpha");
  check_tol(tol);
  if (alpha == 0.0) return pt;

  using Ode4 = Dop853<4>;
  const double radius = default_escape_radius(spec, split_hg(spec, pt).H);
  Ode4 ode(
      [&spec](double, const Ode4::State& s) {
        const PhasePoint f = constraint_field(spec, {s[0], s[1], s[2], s[3]});
        return Ode4::State{f.x, f.y, f.p, f.q};
      },
      {tol, tol});
  double a = 0.0;
  Ode4::State y{pt.x, pt.y, pt.p, pt.q};
  bool escaped = false;
  const OdeStatus status = ode.run(a, y, alpha, [&](double, const Ode4::State& s, const Ode4::State&) {
    escaped = !std::isfinite(s[0]) || std::hypot(s[0], s[1]) > radius;
    return !escaped;
  });
  if (escaped) throw NumericalError("gauge_flow: escaped the family at alpha = " + std::to_string(a));
  if (status != OdeStatus::completed) throw NumericalError("gauge_flow: integration failed");
  return {y[0], y[1], y[2], y[3]};
}

double reduced_hamiltonian(double x, double p) {
  const double x3 = x * x * x;
  return 0.5 * p * p - 0.5 * x3 * x3 / (p * p);
}

ReducedTrajectory reduced_gauge_dynamics(double x0, double p0, double t_max, double tol) {
  if (!std::isfinite(x0) || !std::isfinite(p0)) throw DomainError("reduced_gauge_dynamics: non-finite start");
  if (p0 == 0.0) throw DomainError("reduced_gauge_dynamics: H* is singular at p = 0");
  if (!std::isfinite(t_max) || t_max <= 0.0) throw DomainError("reduced_gauge_dynamics: t_max must be positive");

  ReducedTrajectory out;
  out.hstar = reduced_hamiltonian(x0, p0);
  out.samples.push_back({0.0, x0, p0});
  const double radius = 50.0 * (1.0 + std::sqrt(std::abs(out.hstar))) * (1.0 + std::hypot(x0, p0));
  const double p_floor = 1e-6;

  using Ode2 = Dop853<2>;
  Ode2 ode(
      [](double, const Ode2::State& s) {
        const double x = s[0], p = s[1];
        const double x2 = x * x, x5 = x2 * x2 * x, p2 = p * p;
        return Ode2::State{p + x5 * x / (p2 * p), 3.0 * x5 / p2};
      },
      {tol, tol});
  double t = 0.0;
  Ode2::State y{x0, p0};
  const OdeStatus status = ode.run(t, y, t_max, [&](double tn, const Ode2::State& s, const Ode2::State&) {
    out.samples.push_back({tn, s[0], s[1]});
    if (!std::isfinite(s[0]) || !std::isfinite(s[1]) || std::hypot(s[0], s[1]) > radius) {
      out.classification = {OrbitKind::runaway, tn, "left the escape radius " + std::to_string(radius)};
      return false;
    }
    out.max_hstar_drift = std::max(out.max_hstar_drift, std::abs(reduced_hamiltonian(s[0], s[1]) - out.hstar));
    if (std::abs(s[1]) < p_floor) {
      out.classification = {OrbitKind::runaway, tn, "velocity blow-up at the singular line p = 0"};
      return false;
    }
    return true;
  });
  if (status == OdeStatus::stopped) return out;
  if (status == OdeStatus::step_underflow && std::abs(y[1]) < 1e-2) {
    out.classification = {OrbitKind::runaway, t, "velocity blow-up at the singular line p = 0"};
  } else if (status == OdeStatus::step_underflow || status == OdeStatus::too_many_steps) {
    out.classification = {OrbitKind::undetermined, t, "integration stalled at t = " + std::to_string(t)};
  } else {
    out.classification = {OrbitKind::undetermined, t_max, "no escape before t_max"};
  }
  return out;
}

}  // namespace cryptospec
