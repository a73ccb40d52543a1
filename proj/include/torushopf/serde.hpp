#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "torushopf/lattice.hpp"
#include "torushopf/modes.hpp"
#include "torushopf/orbit.hpp"
#include "torushopf/orbits.hpp"
#include "torushopf/stability.hpp"
#include "torushopf/symmetry.hpp"

namespace torushopf {

inline constexpr const char* kCsvSchemaHeader = "# torus-hopf schema v1";

// 17 significant digits, C locale; the same bits always print the same.
std::string format_double(double v);

using Json = nlohmann::ordered_json;

Json to_json(const ModeIndex& t);
ModeIndex mode_from_json(const Json& j);

Json to_json(const LatticeParams& p);
LatticeParams params_from_json(const Json& j);

Json to_json(const BifurcationRecord& r);
Json to_json(const SymmetryReport& r);
Json to_json(const StabilityVerdict& v);
Json to_json(const AdmissibleEntry& e);
Json to_json(const ExistenceResult& r);

// Orbits serialize with their full sample grid so `verify` can re-read them.
Json to_json(const PeriodicOrbit& o);
PeriodicOrbit orbit_from_json(const Json& j);

void csv_spectrum(std::ostream& out, const LatticeParams& p, double a);
void csv_catalog(std::ostream& out,
                 const std::vector<BifurcationRecord>& records);
void csv_trajectory(std::ostream& out, const LatticeParams& p,
                    const Trajectory& tr);
void csv_branch(std::ostream& out, const BranchTrace& trace);

Json json_spectrum(const LatticeParams& p, double a);
Json json_catalog(const std::vector<BifurcationRecord>& records);
Json json_trajectory(const LatticeParams& p, const Trajectory& tr);
Json json_branch(const BranchTrace& trace);

}  // namespace torushopf
