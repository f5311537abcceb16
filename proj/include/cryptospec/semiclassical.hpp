#pragma once
// Actions of closed-orbit families and Bohr-Sommerfeld levels S(E_k) = pi (2k + 1).

#include <string>

#include "cryptospec/core.hpp"
#include "cryptospec/spectrum.hpp"

namespace cryptospec {

enum class ActionMethod {
  closed_form,  // Gamma-function formulas for n = 1, 2
  derived,      // turning-point geometry formula for any n (validated against quadrature)
  quadrature,   // Gauss-Jacobi along the deformed contour
  orbit,        // loop integral along an integrated stem orbit
};

std::string to_string(ActionMethod method);

struct ActionResult {
  PotentialSpec spec;
  FamilyId family;
  double E = 0.0;
  double S = 0.0;
  ActionMethod method = ActionMethod::closed_form;
};

/// Exponent of |E| in S(E) = S(1) |E|^((2n+3)/(4n+2)).
double action_exponent(int n);

/// Printed closed forms; n must be 1 or 2 (UnsupportedError otherwise).
ActionResult action_closed_form(int n, FamilyId family, double E);

/// S = 4 r sqrt(2|E|) J_n * factor(family) for any n.
ActionResult action_derived(const PotentialSpec& spec, FamilyId family, double E);

/// S = 2 sum_j mult_j |Re int_0^{z_j} sqrt(2(E - V(z))) dz| over the star-shaped contour, with
/// Gauss-Jacobi quadrature absorbing the square-root zero at each turning point.
ActionResult action_numeric(const PotentialSpec& spec, FamilyId family, double E, int nodes = 64);

/// Slow, independent route: integrates the stem orbit and returns |int (p^2 - q^2) dt| over one period.
ActionResult action_along_orbit(const PotentialSpec& spec, FamilyId family, double E, double tol = 1e-12);

/// Best available action: closed form for n <= 2, derived formula otherwise.
ActionResult action(const PotentialSpec& spec, FamilyId family, double E);

/// Bohr-Sommerfeld levels k = 0..k_max of one family, ordered by increasing E.
/// Negative-energy families are flagged prediction-only.
SpectrumResult semiclassical_levels(const PotentialSpec& spec, FamilyId family, int k_max);

/// Bohr-Sommerfeld energy of level k of a family.
double semiclassical_energy(const PotentialSpec& spec, FamilyId family, int k);

}  // namespace cryptospec
