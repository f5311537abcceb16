#pragma once
// Shooting solver for -Psi''/2 + Phi^2 (V(s Phi) - E) Psi = 0 on the half-line z = s Phi,
// with the PT-reduced boundary condition Re[Psi'(0) / (Phi Psi(0))] = 0, and sector classification.

#include <vector>

#include "cryptospec/core.hpp"
#include "cryptospec/spectrum.hpp"

namespace cryptospec {

struct ShootingParams {
  double s_max = 0.0;         // 0: chosen per energy so the WKB decay exponent exceeds wkb_exponent
  double ode_tol = 1e-11;     // relative tolerance of the inward integration
  double e_grid_step = 0.0;   // 0: adaptive, at most 1/5 of the local semiclassical level gap
  double refine_tol = 1e-10;  // absolute bracket width of the final root
  double wkb_exponent = 40.0;

  void validate() const;
};

/// Angular collar around each Stokes asymptote inside which a ray counts as a boundary ray.
inline constexpr double kAsymptoteCollar = 0.02;

/// Analytic classification from the wedge geometry of the Stokes asymptotes.
/// A ray within the collar of an asymptote is classified as boundary unless the sectors on both
/// sides of that asymptote agree.
SectorClass classify_ray(const PotentialSpec& spec, double alpha);

enum class MismatchMode { ratio, reciprocal };

struct Mismatch {
  /// Re[Psi'(0) / (Phi Psi(0))] when |Psi(0)| >= |Psi'(0)| (ratio mode), otherwise the
  /// reciprocal form Re[Phi Psi(0) / Psi'(0)]. Both have the same sign and the same zeros,
  /// and the combination is continuous and bounded by 1.
  double value = 0.0;
  MismatchMode mode = MismatchMode::ratio;
  /// Re[Psi'(0) / (Phi Psi(0))], possibly huge or infinite.
  double ratio = 0.0;
  double s_max = 0.0;
  cplx psi0;
  cplx dpsi0;
};

/// Cut-off s_max beyond which the decaying solution is suppressed by exp(-wkb_exponent).
double auto_s_max(const PotentialSpec& spec, const Ray& ray, double E, double wkb_exponent);

/// Integrates the decaying solution inward from s_max and evaluates the boundary mismatch.
/// Throws NumericalError when no decaying branch exists along the ray.
Mismatch shoot(const PotentialSpec& spec, const Ray& ray, double E, const ShootingParams& params = {});

/// The mismatch value D(E) of shoot().
double shoot_mismatch(const PotentialSpec& spec, const Ray& ray, double E, const ShootingParams& params = {});

struct RootScan {
  std::vector<double> roots;
  std::vector<std::string> diagnostics;
};

/// Scans [E_lo, E_hi] on a uniform grid of the given step, brackets sign changes of D and
/// refines each bracket to params.refine_tol.
RootScan scan_roots(const PotentialSpec& spec, const Ray& ray, double E_lo, double E_hi, double step,
                    const ShootingParams& params = {});

/// Real eigenvalues in (0, E_max] of a discrete-sector ray.
SpectrumResult find_levels(const PotentialSpec& spec, const Ray& ray, double E_max, const ShootingParams& params = {});

/// Classification from the behaviour of D: Empty when no decaying branch exists or D never changes
/// sign on the probe grid, Continuous when |D| < 1e-6 on every probe, Discrete otherwise.
/// Throws ConsistencyError when this disagrees with classify_ray away from the asymptote collars.
SectorClass classify_ray_numeric(const PotentialSpec& spec, const Ray& ray, const ShootingParams& params = {});

}  // namespace cryptospec
