#include "cryptospec/plotdata.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace cryptospec {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,x,y,p,q,H,G\n";
  for (const Sample& s : traj.samples) {
    const HGValue hg = split_hg(traj.spec, s.pt);
    os << format_number(s.t) << ',' << format_number(s.pt.x) << ',' << format_number(s.pt.y) << ','
       << format_number(s.pt.p) << ',' << format_number(s.pt.q) << ',' << format_number(hg.H) << ','
       << format_number(hg.G) << '\n';
  }
}

void write_csv(std::ostream& os, const FlowCurve& curve) {
  os << "g,level,E\n";
  for (std::size_t i = 0; i < curve.g_values.size(); ++i) {
    for (std::size_t j = 0; j < curve.levels[i].size(); ++j) {
      os << format_number(curve.g_values[i]) << ',' << curve.labels[i][j] << ',' << format_number(curve.levels[i][j])
         << '\n';
    }
  }
}

void write_csv(std::ostream& os, const SpectrumResult& spectrum) {
  os << "k,E,method\n";
  for (const Level& l : spectrum.levels) os << l.k << ',' << format_number(l.E) << ',' << to_string(l.method) << '\n';
}

template <class Result>
void emit_plotdata(const Result& result, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + path + " for writing");
  write_csv(file, result);
  file.flush();
  if (!file) throw std::runtime_error("write to " + path + " failed");
}

template void emit_plotdata<Trajectory>(const Trajectory&, const std::string&);
template void emit_plotdata<FlowCurve>(const FlowCurve&, const std::string&);
template void emit_plotdata<SpectrumResult>(const SpectrumResult&, const std::string&);

Json to_json(const PotentialSpec& spec) {
  return Json{{"n", spec.n},
              {"g", spec.g},
              {"oscillator", spec.oscillator},
              {"parity", spec.parity == Parity::odd ? "odd" : "even"}};
}

Json to_json(const PhasePoint& pt) { return Json{{"x", pt.x}, {"y", pt.y}, {"p", pt.p}, {"q", pt.q}}; }

Json to_json(const Trajectory& traj, bool with_samples) {
  Json j{{"spec", to_json(traj.spec)},
         {"start", to_json(traj.samples.front().pt)},
         {"classification", to_string(traj.classification.kind)},
         {"time", traj.classification.time},
         {"energy", traj.energy},
         {"constraint0", traj.constraint0},
         {"max_energy_drift", traj.max_energy_drift},
         {"max_constraint_drift", traj.max_constraint_drift},
         {"action", traj.action},
         {"sample_count", traj.samples.size()}};
  if (!traj.classification.diagnostic.empty()) j["diagnostic"] = traj.classification.diagnostic;
  if (with_samples) {
    Json rows = Json::array();
    for (const Sample& s : traj.samples) rows.push_back(Json::array({s.t, s.pt.x, s.pt.y, s.pt.p, s.pt.q}));
    j["samples"] = {{"columns", Json::array({"t", "x", "y", "p", "q"})}, {"rows", rows}};
  }
  return j;
}

Json to_json(const ReducedTrajectory& traj, bool with_samples) {
  Json j{{"start", {{"x", traj.samples.front().x}, {"p", traj.samples.front().p}}},
         {"classification", to_string(traj.classification.kind)},
         {"time", traj.classification.time},
         {"hstar", traj.hstar},
         {"max_hstar_drift", traj.max_hstar_drift},
         {"sample_count", traj.samples.size()}};
  if (!traj.classification.diagnostic.empty()) j["diagnostic"] = traj.classification.diagnostic;
  if (with_samples) {
    Json rows = Json::array();
    for (const ReducedSample& s : traj.samples) rows.push_back(Json::array({s.t, s.x, s.p}));
    j["samples"] = {{"columns", Json::array({"t", "x", "p"})}, {"rows", rows}};
  }
  return j;
}

Json to_json(const ActionResult& action) {
  return Json{{"family", action.family.name()}, {"E", action.E}, {"S", action.S}, {"method", to_string(action.method)}};
}

Json to_json(const SectorClass& cls) {
  Json j{{"kind", to_string(cls.kind)}};
  if (cls.kind == SectorKind::discrete) j["m"] = cls.m;
  j["asymptote_distance"] = cls.asymptote_distance;
  return j;
}

Json to_json(const SpectrumResult& spectrum) {
  Json levels = Json::array();
  for (const Level& l : spectrum.levels) levels.push_back({{"k", l.k}, {"E", l.E}, {"method", to_string(l.method)}});
  return Json{{"spec", to_json(spectrum.spec)},
              {"alpha", spectrum.ray.alpha},
              {"classification", to_json(spectrum.classification)},
              {"prediction_only", spectrum.prediction_only},
              {"levels", levels}};
}

Json to_json(const FlowCurve& curve) {
  Json points = Json::array();
  for (std::size_t i = 0; i < curve.g_values.size(); ++i) {
    Json lv = Json::array();
    for (std::size_t j = 0; j < curve.levels[i].size(); ++j) {
      lv.push_back({{"label", curve.labels[i][j]}, {"E", curve.levels[i][j]}});
    }
    points.push_back({{"g", curve.g_values[i]}, {"levels", lv}});
  }
  Json co = Json::array();
  for (std::size_t k = 0; k < curve.coalescences.size(); ++k) {
    const Coalescence& c = curve.coalescences[k];
    co.push_back({{"g_above", curve.g_values[c.g_index]},
                  {"g_below", curve.g_values[c.g_index + 1]},
                  {"labels", Json::array({c.lower_label, c.upper_label})},
                  {"E", c.E},
                  {"extrapolation", k >= 2}});
  }
  return Json{{"n", curve.spec.n},
              {"alpha", curve.ray.alpha},
              {"e_ceiling", curve.e_ceiling},
              {"points", points},
              {"coalescences", co}};
}

Json to_json(const ExceptionalPoint& ep) {
  return Json{{"g_star", ep.g_star},
              {"E_star", ep.E_star},
              {"pair", Json::array({ep.pair.first, ep.pair.second})},
              {"g_bracket", Json::array({ep.g_lo, ep.g_hi})},
              {"double_root_residual", ep.double_root_residual},
              {"extrapolation", ep.extrapolation}};
}

}  // namespace cryptospec
