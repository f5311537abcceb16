#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cryptospec/classical.hpp"
#include "cryptospec/cli.hpp"
#include "cryptospec/errors.hpp"
#include "cryptospec/flow.hpp"
#include "cryptospec/oscillator.hpp"
#include "cryptospec/semiclassical.hpp"
#include "cryptospec/spectral.hpp"

namespace py = pybind11;
using namespace cryptospec;

namespace {

PotentialSpec make_spec(int n, double g, bool oscillator, const std::string& parity) {
  PotentialSpec spec{n, g, oscillator, parity == "even" ? Parity::even : Parity::odd};
  if (parity != "odd" && parity != "even") throw DomainError("parity must be 'odd' or 'even'");
  spec.validate();
  return spec;
}

py::dict trajectory_dict(const Trajectory& tr) {
  py::list t, x, y, p, q;
  for (const Sample& s : tr.samples) {
    t.append(s.t);
    x.append(s.pt.x);
    y.append(s.pt.y);
    p.append(s.pt.p);
    q.append(s.pt.q);
  }
  py::dict d;
  d["classification"] = to_string(tr.classification.kind);
  d["time"] = tr.classification.time;
  d["energy"] = tr.energy;
  d["constraint0"] = tr.constraint0;
  d["max_energy_drift"] = tr.max_energy_drift;
  d["max_constraint_drift"] = tr.max_constraint_drift;
  d["action"] = tr.action;
  d["t"] = t;
  d["x"] = x;
  d["y"] = y;
  d["p"] = p;
  d["q"] = q;
  return d;
}

std::vector<double> level_energies(const SpectrumResult& r) {
  std::vector<double> out;
  for (const Level& l : r.levels) out.push_back(l.E);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Complexified classical dynamics and spectra of -(ix)^(2n+1) potentials";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<UnsupportedError>(m, "UnsupportedError", PyExc_NotImplementedError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<ConsistencyError>(m, "ConsistencyError", PyExc_RuntimeError);

  m.def("parse_angle", &parse_angle, py::arg("text"));

  m.def(
      "potential",
      [](std::complex<double> z, int n, double g, bool oscillator) {
        return eval_potential(make_spec(n, g, oscillator, "odd"), z);
      },
      py::arg("z"), py::arg("n") = 1, py::arg("g") = 1.0, py::arg("oscillator") = false);

  m.def(
      "split_hg",
      [](double x, double y, double p, double q, int n, double g, bool oscillator) {
        const HGValue hg = split_hg(make_spec(n, g, oscillator, "odd"), {x, y, p, q});
        return py::make_tuple(hg.H, hg.G);
      },
      py::arg("x"), py::arg("y"), py::arg("p"), py::arg("q"), py::arg("n") = 1, py::arg("g") = 1.0,
      py::arg("oscillator") = false);

  m.def(
      "turning_points",
      [](double E, int n, double g, bool oscillator) {
        return turning_points(make_spec(n, g, oscillator, "odd"), E).points;
      },
      py::arg("E"), py::arg("n") = 1, py::arg("g") = 1.0, py::arg("oscillator") = false);

  m.def(
      "stokes_asymptotes",
      [](int n, double g, bool oscillator, const std::string& parity) {
        return stokes_asymptotes(make_spec(n, g, oscillator, parity));
      },
      py::arg("n") = 1, py::arg("g") = 1.0, py::arg("oscillator") = false, py::arg("parity") = "odd");

  m.def(
      "stem_trajectory",
      [](int n, double E, const std::string& family, double tol) {
        const PotentialSpec spec = PotentialSpec::pure(n);
        return trajectory_dict(stem_trajectory(spec, E, FamilyId::parse(family, n), tol));
      },
      py::arg("n"), py::arg("E"), py::arg("family") = "pos-0", py::arg("tol") = 1e-12);

  m.def(
      "integrate",
      [](std::vector<double> start, double t_max, int n, double g, bool oscillator, double tol) {
        if (start.size() != 4) throw DomainError("start must be (x, y, p, q)");
        const PotentialSpec spec = make_spec(n, g, oscillator, "odd");
        return trajectory_dict(integrate(spec, {start[0], start[1], start[2], start[3]}, t_max, tol));
      },
      py::arg("start"), py::arg("t_max"), py::arg("n") = 1, py::arg("g") = 1.0, py::arg("oscillator") = false,
      py::arg("tol") = 1e-12);

  m.def(
      "action",
      [](int n, const std::string& family, double E, const std::string& method) {
        const PotentialSpec spec = PotentialSpec::pure(n);
        const FamilyId fam = FamilyId::parse(family, n);
        if (method == "closed_form") return action_closed_form(n, fam, E).S;
        if (method == "quadrature") return action_numeric(spec, fam, E).S;
        if (method == "derived") return action_derived(spec, fam, E).S;
        if (method == "orbit") return action_along_orbit(spec, fam, E).S;
        throw DomainError("method must be closed_form, quadrature, derived or orbit");
      },
      py::arg("n"), py::arg("family"), py::arg("E"), py::arg("method") = "quadrature");

  m.def(
      "semiclassical_levels",
      [](int n, const std::string& family, int k_max) {
        return level_energies(semiclassical_levels(PotentialSpec::pure(n), FamilyId::parse(family, n), k_max));
      },
      py::arg("n"), py::arg("family") = "pos-0", py::arg("k_max") = 3);

  m.def(
      "classify_ray",
      [](double alpha, int n, double g, bool oscillator, const std::string& parity) {
        const SectorClass c = classify_ray(make_spec(n, g, oscillator, parity), alpha);
        return py::make_tuple(to_string(c.kind), c.kind == SectorKind::discrete ? py::object(py::int_(c.m))
                                                                                  : py::object(py::none()));
      },
      py::arg("alpha"), py::arg("n") = 1, py::arg("g") = 1.0, py::arg("oscillator") = false,
      py::arg("parity") = "odd");

  m.def(
      "find_levels",
      [](double alpha, double E_max, int n, double g, bool oscillator) {
        const SpectrumResult r = find_levels(make_spec(n, g, oscillator, "odd"), Ray::at(alpha), E_max);
        return py::make_tuple(level_energies(r), r.diagnostics);
      },
      py::arg("alpha"), py::arg("E_max"), py::arg("n") = 1, py::arg("g") = 1.0, py::arg("oscillator") = false);

  m.def(
      "shoot_mismatch",
      [](double alpha, double E, int n, double g, bool oscillator) {
        return shoot_mismatch(make_spec(n, g, oscillator, "odd"), Ray::at(alpha), E);
      },
      py::arg("alpha"), py::arg("E"), py::arg("n") = 1, py::arg("g") = 1.0, py::arg("oscillator") = false);

  m.def(
      "exceptional_point",
      [](int n, double alpha, std::pair<int, int> pair, double g_lo, double g_hi) {
        const ExceptionalPoint ep = find_exceptional_point(n, alpha, pair, {g_lo, g_hi});
        return py::make_tuple(ep.g_star, ep.E_star);
      },
      py::arg("n"), py::arg("alpha"), py::arg("pair"), py::arg("g_lo"), py::arg("g_hi"));

  m.def(
      "osc_spectrum",
      [](const std::string& mode, int k) {
        if (mode == "real") return osc_spectrum(OscQuantization::real_axis_gauge, k);
        if (mode == "imag") return osc_spectrum(OscQuantization::imag_axis_gauge, k);
        if (mode == "dirac") return osc_spectrum(OscQuantization::dirac_constraint, k);
        throw DomainError("mode must be real, imag or dirac");
      },
      py::arg("mode"), py::arg("k"));

  m.def(
      "kernel_coefficients",
      [](int d, int j_max) {
        const KernelState s = dirac_kernel_state(d, j_max);
        std::vector<double> out;
        for (int j = 0; j < s.size(); ++j) out.push_back(s.value(j));
        return out;
      },
      py::arg("d"), py::arg("j_max"));

  m.def(
      "kernel_exact",
      [](int j_max) {
        const KernelState s = dirac_kernel_state(0, j_max);
        std::vector<std::string> out;
        for (int j = 0; j < s.size(); ++j) out.push_back(s.exact(j).str());
        return out;
      },
      py::arg("j_max"), "Exact d = 0 coefficients as 'p/q' strings.");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"cryptospec"};
        for (const std::string& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
