#include "cryptospec/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <ostream>
#include <regex>
#include <sstream>

#include "cryptospec/classical.hpp"
#include "cryptospec/errors.hpp"
#include "cryptospec/flow.hpp"
#include "cryptospec/oscillator.hpp"
#include "cryptospec/semiclassical.hpp"
#include "cryptospec/spectral.hpp"

namespace cryptospec {

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(RunConfig, subcommand, n, g, oscillator, parity, alpha, format, out, tol,
                                                energy, family, start, gauge, reduced, t_max, samples, orbit_action, emax,
                                                kmax, semiclassical, s_max, ode_tol, e_step, refine_tol, grid, numeric,
                                                g_from, g_to, levels, ratio, pair, g_hi, g_lo, rel_tol, mode, k, d, j_max,
                                                basis)

double parse_angle(std::string_view text) {
  static const std::regex with_pi(R"(^\s*([+-]?)\s*(\d+(?:\.\d*)?|\.\d+)?\s*(?:/\s*(\d+))?\s*\*?\s*pi\s*(?:/\s*(\d+))?\s*$)");
  static const std::regex plain(R"(^\s*[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?\s*$)");
  const std::string s(text);
  std::smatch m;
  if (std::regex_match(s, m, plain)) return std::stod(s);
  if (std::regex_match(s, m, with_pi)) {
    double v = m[2].matched ? std::stod(m[2].str()) : 1.0;
    if (m[3].matched && m[4].matched) throw DomainError("angle: two denominators in '" + s + "'");
    if (m[3].matched) v /= std::stod(m[3].str());
    if (m[4].matched) v /= std::stod(m[4].str());
    if (m[1].str() == "-") v = -v;
    return v * kPi;
  }
  throw DomainError("angle: cannot parse '" + s + "' (use radians or a fraction such as -3/14pi)");
}

Json to_json(const RunConfig& config) {
  nlohmann::json j = config;
  return Json::parse(j.dump());
}

RunConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw DomainError("config: expected a JSON object");
  const nlohmann::json reference = RunConfig{};
  for (const auto& item : j.items()) {
    if (!reference.contains(item.key())) throw DomainError("config: unknown key '" + item.key() + "'");
  }
  try {
    return nlohmann::json::parse(j.dump()).get<RunConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("config: ") + e.what());
  }
}

namespace {

struct Outcome {
  Json result;
  std::vector<std::string> diagnostics;
  std::string csv;
  bool failed = false;  // numerical failure (exit 3)
};

PotentialSpec spec_of(const RunConfig& c) {
  PotentialSpec spec{c.n, c.g, c.oscillator, c.parity == "even" ? Parity::even : Parity::odd};
  if (c.parity != "odd" && c.parity != "even") throw DomainError("--parity must be odd or even");
  spec.validate();
  return spec;
}

ShootingParams shooting_of(const RunConfig& c) {
  ShootingParams p;
  p.s_max = c.s_max;
  p.ode_tol = c.ode_tol;
  p.e_grid_step = c.e_step;
  p.refine_tol = c.refine_tol;
  p.validate();
  return p;
}

template <class T>
std::string csv_of(const T& value) {
  std::ostringstream os;
  write_csv(os, value);
  return os.str();
}

Outcome run_orbits(const RunConfig& c) {
  Outcome o;
  if (!c.reduced.empty()) {
    if (c.reduced.size() != 2) throw DomainError("--reduced takes x p");
    const ReducedTrajectory tr = reduced_gauge_dynamics(c.reduced[0], c.reduced[1], c.t_max > 0.0 ? c.t_max : 50.0);
    o.result = to_json(tr, c.samples);
    std::ostringstream os;
    os << "t,x,p\n";
    for (const ReducedSample& s : tr.samples) {
      os << format_number(s.t) << ',' << format_number(s.x) << ',' << format_number(s.p) << '\n';
    }
    o.csv = os.str();
    if (tr.classification.kind == OrbitKind::undetermined) {
      o.diagnostics.push_back("reduced orbit undetermined: " + tr.classification.diagnostic);
      o.failed = true;
    }
    return o;
  }

  const PotentialSpec spec = spec_of(c);
  PhasePoint start;
  IntegrateOptions opt;
  double t_max = c.t_max;
  if (!c.start.empty()) {
    if (c.start.size() != 4) throw DomainError("--start takes x y p q");
    start = {c.start[0], c.start[1], c.start[2], c.start[3]};
    if (t_max <= 0.0) t_max = 50.0;
  } else {
    const FamilyId family = FamilyId::parse(c.family, spec.n);
    start = stem_start(spec, c.energy, family);
    const double period = family_period(spec, family, c.energy);
    opt.min_return_time = 0.5 * period;
    if (t_max <= 0.0) t_max = 3.0 * period;
  }

  std::vector<double> alphas{0.0};
  alphas.insert(alphas.end(), c.gauge.begin(), c.gauge.end());
  Json orbits = Json::array();
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const PhasePoint p0 = gauge_flow(spec, start, alphas[i], c.tol);
    const Trajectory tr = integrate(spec, p0, t_max, c.tol, opt);
    Json j = to_json(tr, c.samples);
    j["gauge_alpha"] = alphas[i];
    orbits.push_back(j);
    if (i == 0) o.csv = csv_of(tr);
    if (tr.classification.kind == OrbitKind::undetermined) {
      o.diagnostics.push_back("orbit " + std::to_string(i) + " undetermined: " + tr.classification.diagnostic);
      o.failed = true;
    }
  }
  o.result = {{"orbits", orbits}};
  return o;
}

Outcome run_actions(const RunConfig& c) {
  Outcome o;
  const PotentialSpec spec = spec_of(c);
  spec.require_pure("actions");
  const double e = std::abs(c.energy);
  Json rows = Json::array();
  std::ostringstream csv;
  csv << "family,E,method,S\n";
  auto add = [&](const ActionResult& a) {
    rows.push_back(to_json(a));
    csv << a.family.name() << ',' << format_number(a.E) << ',' << to_string(a.method) << ',' << format_number(a.S)
        << '\n';
  };
  for (EnergySign sign : {EnergySign::positive, EnergySign::negative}) {
    for (int m = 0; m < spec.n; ++m) {
      const FamilyId family{sign, m};
      const double E = family.sign_value() * e;
      if (spec.n <= 2 && spec.g == 1.0) add(action_closed_form(spec.n, family, E));
      add(action_derived(spec, family, E));
      add(action_numeric(spec, family, E));
      if (c.orbit_action) add(action_along_orbit(spec, family, E, c.tol));
    }
  }
  o.result = {{"actions", rows}};
  o.csv = csv.str();
  return o;
}

Outcome run_levels(const RunConfig& c) {
  Outcome o;
  const PotentialSpec spec = spec_of(c);
  const Ray ray = Ray::at(parse_angle(c.alpha));
  const SpectrumResult shooting = find_levels(spec, ray, c.emax, shooting_of(c));
  o.diagnostics = shooting.diagnostics;
  o.failed = !shooting.diagnostics.empty();
  o.result = {{"shooting", to_json(shooting)}};
  o.csv = csv_of(shooting);
  if (c.semiclassical && shooting.classification.kind == SectorKind::discrete) {
    if (!spec.is_pure()) throw DomainError("--semiclassical needs the pure potential");
    const SpectrumResult semi = semiclassical_levels(spec, FamilyId::pos(shooting.classification.m), c.kmax);
    o.result["semiclassical"] = to_json(semi);
    const std::string rows = csv_of(semi);
    o.csv += rows.substr(rows.find('\n') + 1);
  }
  return o;
}

Outcome run_sectors(const RunConfig& c, bool single) {
  Outcome o;
  const PotentialSpec spec = spec_of(c);
  std::vector<double> alphas;
  if (single || c.grid <= 0) {
    alphas.push_back(parse_angle(c.alpha));
  } else {
    for (int i = 0; i < c.grid; ++i) alphas.push_back(-kPi + 2.0 * kPi * (i + 0.5) / c.grid);
  }
  const ShootingParams params = shooting_of(c);
  Json rows = Json::array();
  std::ostringstream csv;
  csv << "alpha,analytic" << (c.numeric ? ",numeric" : "") << '\n';
  for (double a : alphas) {
    const SectorClass analytic = classify_ray(spec, a);
    Json row{{"alpha", a}, {"analytic", to_json(analytic)}};
    csv << format_number(a) << ',' << analytic.name();
    if (c.numeric) {
      const SectorClass numeric = classify_ray_numeric(spec, Ray::at(a), params);
      row["numeric"] = to_json(numeric);
      csv << ',' << numeric.name();
    }
    csv << '\n';
    rows.push_back(row);
    if (alphas.size() == 1 && analytic.kind == SectorKind::boundary) {
      o.diagnostics.push_back("boundary-indeterminate ray at alpha = " + format_number(a));
      o.failed = true;
    }
  }
  o.result = {{"rays", rows}, {"asymptotes", stokes_asymptotes(spec)}};
  o.csv = csv.str();
  return o;
}

Outcome run_flow(const RunConfig& c) {
  Outcome o;
  FlowOptions opt;
  opt.ratio = c.ratio;
  if (c.e_step > 0.0) opt.e_step = c.e_step;
  opt.shooting.ode_tol = c.ode_tol;
  opt.shooting.refine_tol = c.refine_tol;
  const FlowCurve curve = spectral_flow(c.n, parse_angle(c.alpha), c.g_from, c.g_to, c.levels, opt);
  o.result = to_json(curve);
  o.diagnostics = curve.diagnostics;
  o.csv = csv_of(curve);
  return o;
}

Outcome run_ep(const RunConfig& c) {
  Outcome o;
  if (c.pair.size() != 2) throw DomainError("--pair takes two level indices");
  EpOptions opt;
  opt.rel_tol = c.rel_tol;
  opt.shooting.ode_tol = c.ode_tol;
  opt.shooting.refine_tol = c.refine_tol;
  const ExceptionalPoint ep =
      find_exceptional_point(c.n, parse_angle(c.alpha), {c.pair[0], c.pair[1]}, {c.g_lo, c.g_hi}, opt);
  o.result = to_json(ep);
  std::ostringstream csv;
  csv << "g_star,E_star,lower,upper\n"
      << format_number(ep.g_star) << ',' << format_number(ep.E_star) << ',' << ep.pair.first << ',' << ep.pair.second
      << '\n';
  o.csv = csv.str();
  return o;
}

Outcome run_oscillator(const RunConfig& c, bool kernel) {
  Outcome o;
  OscQuantization mode = OscQuantization::dirac_constraint;
  if (c.mode == "real") {
    mode = OscQuantization::real_axis_gauge;
  } else if (c.mode == "imag") {
    mode = OscQuantization::imag_axis_gauge;
  } else if (c.mode != "dirac") {
    throw DomainError("--mode must be real, imag or dirac");
  }
  const double E = osc_spectrum(mode, c.k);
  o.result = {{"mode", c.mode}, {"k", c.k}, {"E", E}};
  std::ostringstream csv;
  if (!kernel) {
    csv << "mode,k,E\n" << c.mode << ',' << c.k << ',' << format_number(E) << '\n';
    o.csv = csv.str();
    return o;
  }

  const KernelState state = dirac_kernel_state(c.d, c.j_max);
  Json coeffs = Json::array();
  csv << "j,c\n";
  for (int j = 0; j < state.size(); ++j) {
    Json row{{"j", j}, {"value", state.value(j)}, {"gamma", state.gamma[static_cast<std::size_t>(j)].str()}};
    if (c.d == 0) row["exact"] = state.exact(j).str();
    coeffs.push_back(row);
    csv << j << ',' << format_number(state.value(j)) << '\n';
  }
  o.result["kernel"] = {{"d", c.d}, {"coefficients", coeffs}};
  if (c.basis > 0) {
    const ConstrainedMatrices mats = build_constrained_matrices(c.basis);
    const Eigen::VectorXd v = embed_kernel_state(mats, state);
    const Eigen::VectorXd r = mats.G * v;
    const int shift = std::abs(c.d);
    const int edge = c.d >= 0 ? mats.index(c.basis, c.basis - shift) : mats.index(c.basis - shift, c.basis);
    double bulk = 0.0;
    for (int i = 0; i < r.size(); ++i) {
      if (i != edge) bulk = std::max(bulk, std::abs(r(i)));
    }
    o.result["truncation"] = {{"N", c.basis}, {"bulk_residual", bulk}, {"edge_residual", std::abs(r(edge))}};
  }
  o.csv = csv.str();
  return o;
}

std::string config_path(int argc, const char* const* argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string_view a = argv[i];
    if (a == "--config" && i + 1 < argc) return argv[i + 1];
    if (a.substr(0, 9) == "--config=") return std::string(a.substr(9));
  }
  return {};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  const std::string cfg_path = config_path(argc, argv);
  if (!cfg_path.empty()) {
    std::ifstream in(cfg_path);
    if (!in) {
      err << "error: cannot read config file " << cfg_path << '\n';
      return 1;
    }
    try {
      cfg = config_from_json(Json::parse(in));
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return 2;
    }
  }

  CLI::App app{"Crypto-Hermitian spectra: classical orbits, actions, shooting levels, spectral flow"};
  app.fallthrough();
  app.require_subcommand(1);
  std::string config_flag = cfg_path;
  app.add_option("--config", config_flag, "JSON file with a RunConfig; flags override it");
  app.add_option("--n", cfg.n, "Exponent index: potential power 2n+1")->capture_default_str();
  app.add_option("--g", cfg.g, "Coupling g")->capture_default_str();
  app.add_flag("--oscillator", cfg.oscillator, "Add the x^2/2 oscillator term");
  app.add_option("--parity", cfg.parity, "odd or even power")->capture_default_str();
  auto* alpha_opt = app.add_option("--alpha", cfg.alpha, "Ray angle: radians or a fraction like -3/14pi")->capture_default_str();
  app.add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--out", cfg.out, "Write the primary output to this file");
  app.add_option("--tol", cfg.tol, "Integrator tolerance in [1e-13, 1e-6]")->capture_default_str();
  auto shooting_flags = [&](CLI::App* sub) {
    sub->add_option("--s-max", cfg.s_max, "Shooting cut-off (0: automatic)")->capture_default_str();
    sub->add_option("--ode-tol", cfg.ode_tol, "Shooting ODE tolerance")->capture_default_str();
    sub->add_option("--e-step", cfg.e_step, "Energy grid step (0: adaptive)")->capture_default_str();
    sub->add_option("--refine-tol", cfg.refine_tol, "Eigenvalue bracket width")->capture_default_str();
  };

  auto* orbits = app.add_subcommand("orbits", "Integrate stem or user-supplied orbits and their gauge images");
  orbits->add_option("--energy", cfg.energy, "Energy of the stem orbit")->capture_default_str();
  orbits->add_option("--family", cfg.family, "pos-m / neg-m (pos-up etc. for n = 2)")->capture_default_str();
  orbits->add_option("--start", cfg.start, "Initial x y p q instead of the stem start")->expected(4);
  orbits->add_option("--gauge", cfg.gauge, "Gauge parameters alpha applied to the start")->expected(1, 64);
  orbits->add_option("--reduced", cfg.reduced, "Integrate the gauge-fixed reduced system from x p")->expected(2);
  orbits->add_option("--t-max", cfg.t_max, "Integration time (0: automatic)")->capture_default_str();
  orbits->add_flag("--samples", cfg.samples, "Include all samples in JSON output");

  auto* actions = app.add_subcommand("actions", "Actions of every orbit family at +E and -E");
  actions->add_option("--energy", cfg.energy, "|E|")->capture_default_str();
  actions->add_flag("--orbit", cfg.orbit_action, "Also integrate the stem orbits (slow check)");

  auto* levels = app.add_subcommand("levels", "Shooting eigenvalues along a ray");
  levels->add_option("--emax", cfg.emax, "Upper end of the energy scan")->capture_default_str();
  levels->add_option("--kmax", cfg.kmax, "Highest semiclassical level")->capture_default_str();
  levels->add_flag("--semiclassical", cfg.semiclassical, "Add Bohr-Sommerfeld levels of the matching family");
  shooting_flags(levels);

  auto* sectors = app.add_subcommand("sectors", "Classify rays (a grid, or the ray given by --alpha)");
  sectors->add_option("--grid", cfg.grid, "Number of rays in (-pi, pi]")->capture_default_str();
  sectors->add_flag("--numeric", cfg.numeric, "Cross-check with the shooting mismatch");
  shooting_flags(sectors);

  auto* flow = app.add_subcommand("flow", "Level flow of the mixed potential in g");
  flow->add_option("--g-from", cfg.g_from, "Largest coupling")->capture_default_str();
  flow->add_option("--g-to", cfg.g_to, "Smallest coupling")->capture_default_str();
  flow->add_option("--levels", cfg.levels, "Levels tracked from g-from")->capture_default_str();
  flow->add_option("--ratio", cfg.ratio, "Geometric ratio of the g grid")->capture_default_str();
  flow->add_option("--e-step", cfg.e_step, "Energy grid step (0: 0.01)")->capture_default_str();

  auto* ep = app.add_subcommand("ep", "Exceptional point of a level pair of the mixed potential");
  ep->add_option("--pair", cfg.pair, "Level indices at g-hi")->expected(2);
  ep->add_option("--g-hi", cfg.g_hi, "Coupling where the pair is real")->capture_default_str();
  ep->add_option("--g-lo", cfg.g_lo, "Coupling where the pair is gone")->capture_default_str();
  ep->add_option("--rel-tol", cfg.rel_tol, "Relative width of the final g bracket")->capture_default_str();

  auto* osc = app.add_subcommand("oscillator", "Complexified oscillator analytics");
  osc->add_option("--mode", cfg.mode, "real, imag or dirac")->capture_default_str();
  osc->add_option("--k", cfg.k, "Level index")->capture_default_str();
  auto* kernel_opt = osc->add_option("--kernel", cfg.d, "Kernel state of G in the block n - m = d");
  osc->add_option("--jmax", cfg.j_max, "Last kernel coefficient")->capture_default_str();
  osc->add_option("--basis", cfg.basis, "Check the kernel on the truncated basis 0 <= n, m <= N");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();

  Outcome outcome;
  try {
    if (!(cfg.tol >= 1e-13 && cfg.tol <= 1e-6)) throw DomainError("--tol must lie in [1e-13, 1e-6]");
    if (cfg.format != "json" && cfg.format != "csv") throw DomainError("--format must be json or csv");
    if (cfg.subcommand == "orbits") outcome = run_orbits(cfg);
    if (cfg.subcommand == "actions") outcome = run_actions(cfg);
    if (cfg.subcommand == "levels") outcome = run_levels(cfg);
    if (cfg.subcommand == "sectors") outcome = run_sectors(cfg, alpha_opt->count() > 0);
    if (cfg.subcommand == "flow") outcome = run_flow(cfg);
    if (cfg.subcommand == "ep") outcome = run_ep(cfg);
    if (cfg.subcommand == "oscillator") outcome = run_oscillator(cfg, kernel_opt->count() > 0 || !cfg_path.empty());
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    outcome = Outcome{};
    outcome.result = nullptr;
    outcome.diagnostics.push_back(e.what());
    outcome.failed = true;
  }

  std::string text;
  if (cfg.format == "json") {
    Json doc{{"config", to_json(cfg)}, {"result", outcome.result}, {"diagnostics", outcome.diagnostics}};
    text = doc.dump(2) + "\n";
  } else {
    text = outcome.csv;
    for (const std::string& d : outcome.diagnostics) err << "diagnostic: " << d << '\n';
  }
  if (cfg.out.empty()) {
    out << text;
  } else {
    std::ofstream file(cfg.out, std::ios::binary);
    file << text;
    if (!file) {
      err << "error: cannot write " << cfg.out << '\n';
      return 1;
    }
  }
  return outcome.failed ? 3 : 0;
}

}  // namespace cryptospec
