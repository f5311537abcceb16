#pragma once
// CSV plot data (header line, fixed 12-significant-digit numbers, deterministic row order)
// and JSON views of the result types.

#include <iosfwd>
#include <json.hpp>
#include <string>

#include "cryptospec/classical.hpp"
#include "cryptospec/flow.hpp"
#include "cryptospec/semiclassical.hpp"
#include "cryptospec/spectrum.hpp"

namespace cryptospec {

using Json = nlohmann::ordered_json;

/// 12 significant digits, shortest of fixed/scientific ("%.12g").
std::string format_number(double v);

void write_csv(std::ostream& os, const Trajectory& traj);         // t,x,y,p,q,H,G
void write_csv(std::ostream& os, const FlowCurve& curve);         // g,level,E
void write_csv(std::ostream& os, const SpectrumResult& spectrum); // k,E,method

/// Writes the CSV form of `result` to `path`; throws std::runtime_error on I/O failure.
template <class Result>
void emit_plotdata(const Result& result, const std::string& path);

Json to_json(const PotentialSpec& spec);
Json to_json(const PhasePoint& pt);
Json to_json(const Trajectory& traj, bool with_samples);
Json to_json(const ReducedTrajectory& traj, bool with_samples);
Json to_json(const ActionResult& action);
Json to_json(const SectorClass& cls);
Json to_json(const SpectrumResult& spectrum);
Json to_json(const FlowCurve& curve);
Json to_json(const ExceptionalPoint& ep);

}  // namespace cryptospec
