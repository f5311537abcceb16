#pragma once
// Command-line front end: orbits, actions, levels, sectors, flow, ep, oscillator.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cryptospec/plotdata.hpp"

namespace cryptospec {

/// Parses "0.3", "-3/14pi", "-3/14 pi", "pi/2", "-pi", "0.5pi" into radians.
double parse_angle(std::string_view text);

struct RunConfig {
  std::string subcommand;
  // potential
  int n = 1;
  double g = 1.0;
  bool oscillator = false;
  std::string parity = "odd";
  std::string alpha = "0";
  // output
  std::string format = "json";
  std::string out;
  double tol = 1e-12;
  // orbits / actions
  double energy = 64.0;
  std::string family = "pos-0";
  std::vector<double> start;  // x, y, p, q
  std::vector<double> gauge;  // gauge parameters applied to the start
  std::vector<double> reduced;  // x, p of the reduced gauge-fixed system
  double t_max = 0.0;         // 0: three estimated periods (stem) or 50
  bool samples = false;
  bool orbit_action = false;
  // levels
  double emax = 8.0;
  int kmax = 3;
  bool semiclassical = false;
  double s_max = 0.0;
  double ode_tol = 1e-11;
  double e_step = 0.0;
  double refine_tol = 1e-10;
  // sectors
  int grid = 72;
  bool numeric = false;
  // flow / ep
  double g_from = 0.1;
  double g_to = 0.01;
  int levels = 3;
  double ratio = 0.92;
  std::vector<int> pair{0, 1};
  double g_hi = 0.06;
  double g_lo = 0.02;
  double rel_tol = 1e-5;
  // oscillator
  std::string mode = "dirac";
  int k = 0;
  int d = 0;
  int j_max = 20;
  int basis = 0;  // N of the truncated two-mode basis; 0 skips the matrix check

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

Json to_json(const RunConfig& config);
RunConfig config_from_json(const Json& j);

/// Executes one subcommand. Exit codes: 0 success, 1 I/O failure, 2 usage error,
/// 3 numerical failure (missed level, boundary ray, failed integration, inconsistent checks).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cryptospec
