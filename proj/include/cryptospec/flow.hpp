#pragma once
// Spectral flow of (p^2 + x^2)/2 - g (ix)^(2n+1) in the coupling g and exceptional points
// where two real levels coalesce.

#include <string>
#include <utility>
#include <vector>

#include "cryptospec/core.hpp"
#include "cryptospec/spectral.hpp"
#include "cryptospec/spectrum.hpp"

namespace cryptospec {

struct FlowOptions {
  double ratio = 0.92;        // g_{i+1} = ratio * g_i
  double e_step = 0.01;       // energy grid step of the per-g root scans
  double e_floor = 0.05;      // lower end of the energy window
  int max_refinements = 6;    // grid bisections allowed when the level count drops by an odd number
  ShootingParams shooting{};
};

struct Coalescence {
  std::size_t g_index = 0;  // the pair exists at g_values[g_index] and is gone at g_index + 1
  int lower_label = -1;
  int upper_label = -1;
  double E = 0.0;           // mean energy of the pair at g_values[g_index]
};

struct FlowCurve {
  PotentialSpec spec;  // mixed potential at g = g_from
  Ray ray;
  double e_ceiling = 0.0;
  std::vector<double> g_values;             // decreasing
  std::vector<std::vector<double>> levels;  // per g, ascending
  std::vector<std::vector<int>> labels;     // per g, the track label of each level
  /// links[i][j]: index in levels[i+1] of the continuation of levels[i][j], or -1.
  std::vector<std::vector<int>> links;
  std::vector<Coalescence> coalescences;
  std::vector<std::string> diagnostics;

  /// Energy of the level carrying `label` at g_values[i], or NaN.
  [[nodiscard]] double energy_of(std::size_t i, int label) const;
};

/// Levels of the mixed potential on a geometric g grid from g_from down to g_to, tracking the
/// lowest n_levels levels present at g_from.
FlowCurve spectral_flow(int n, double alpha, double g_from, double g_to, int n_levels, const FlowOptions& options = {});

struct ExceptionalPoint {
  double g_star = 0.0;
  double E_star = 0.0;
  std::pair<int, int> pair{0, 1};  // indices in the ascending list of real levels at g_bracket.second
  double g_lo = 0.0;               // final bracket: no roots in the window at g_lo,
  double g_hi = 0.0;               // two roots at g_hi
  double double_root_residual = 0.0;  // |D| at E_star divided by the mismatch scale of the window
  bool extrapolation = false;
};

struct EpOptions {
  double rel_tol = 1e-5;    // relative width of the final g bracket
  double march_ratio = 0.98;
  ShootingParams shooting{};
};

/// Locates the coupling where levels pair.first and pair.second (ascending order at g_bracket.second)
/// coalesce, by bisection on the predicate "two real roots of D in the tracked window".
ExceptionalPoint find_exceptional_point(int n, double alpha, std::pair<int, int> pair,
                                        std::pair<double, double> g_bracket, const EpOptions& options = {});

/// Ground-state energy 1/2 + 449 g^2 / 32 of the quintic mixed potential to second order in g.
double perturbative_E0(double g);

}  // namespace cryptospec
