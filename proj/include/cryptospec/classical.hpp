#pragma once
// Real four-dimensional Hamilton dynamics of the complexified system (gauge lambda = 0),
// closed-orbit and runaway detection, gauge images of orbits and the gauge-fixed
// reduced system H* = p^2/2 - x^6/(2 p^2).

#include <string>
#include <vector>

#include "cryptospec/core.hpp"

namespace cryptospec {

enum class OrbitKind { closed, runaway, undetermined };

std::string to_string(OrbitKind kind);

struct OrbitClass {
  OrbitKind kind = OrbitKind::undetermined;
  double time = 0.0;  // period (closed) or escape time (runaway)
  std::string diagnostic;
};

struct Sample {
  double t = 0.0;
  PhasePoint pt;
};

struct Trajectory {
  PotentialSpec spec;
  std::vector<Sample> samples;
  OrbitClass classification;
  double energy = 0.0;       // H at t = 0
  double constraint0 = 0.0;  // G at t = 0
  double max_energy_drift = 0.0;
  double max_constraint_drift = 0.0;
  /// |integral of (p^2 - q^2) dt| over the integrated span; one full period for closed orbits
  /// this is the action |Re of the loop integral of pi dz|.
  double action = 0.0;
};

struct IntegrateOptions {
  /// Closure is only accepted after this time (0: accept after the orbit has left its start).
  double min_return_time = 0.0;
  /// Escape radius in the z plane (0: 50 (1 + |E|)^{1/N}).
  double escape_radius = 0.0;
  bool detect_closure = true;
};

double default_escape_radius(const PotentialSpec& spec, double E);

/// Adaptive integration of dx/dt = dH/dp, dy/dt = dH/dq, dp/dt = -dH/dx, dq/dt = -dH/dy.
/// tol in [1e-13, 1e-6] is the per-step relative and absolute tolerance.
Trajectory integrate(const PotentialSpec& spec, const PhasePoint& start, double t_max, double tol,
                     const IntegrateOptions& options = {});

/// Stem orbit of a family: launched from the right turning point of its PT-symmetric pair with zero momenta.
Trajectory stem_trajectory(const PotentialSpec& spec, double E, FamilyId family, double tol = 1e-12);

PhasePoint stem_start(const PotentialSpec& spec, double E, FamilyId family);

/// Flow of pt for a "time" alpha along the Hamiltonian vector field of G, i.e. z(t) -> z(t - i alpha).
/// Throws NumericalError if the flow leaves the escape radius.
PhasePoint gauge_flow(const PotentialSpec& spec, const PhasePoint& pt, double alpha, double tol = 1e-12);

struct ReducedSample {
  double t = 0.0;
  double x = 0.0;
  double p = 0.0;
};

struct ReducedTrajectory {
  std::vector<ReducedSample> samples;
  OrbitClass classification;
  double hstar = 0.0;  // conserved H* at t = 0
  double max_hstar_drift = 0.0;
};

double reduced_hamiltonian(double x, double p);

/// dx/dt = p + x^6/p^3, dp/dt = 3 x^5/p^2.
ReducedTrajectory reduced_gauge_dynamics(double x0, double p0, double t_max, double tol = 1e-11);

}  // namespace cryptospec
