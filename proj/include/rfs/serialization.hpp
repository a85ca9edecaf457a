#pragma once

#include "rfs/simulation.hpp"

#include <json.hpp>

#include <string>

namespace rfs::io {

using nlohmann::json;

/// Round-tripping decimal formatting for CSV cells.
std::string format_double(double x);

json scenario_to_json(const ScenarioConfig& cfg);
ScenarioConfig scenario_from_json(const json& j);

struct Dataset {
  ScenarioConfig scenario;
  std::uint64_t seed = 0;
  TrajectorySet truth;  // trajectories plus per-step measurement sets
};

json dataset_to_json(const Dataset& ds);
Dataset dataset_from_json(const json& j);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// Estimates CSV: step,track_id,<state components>. Four-dimensional states
/// use the px,vx,py,vy column names; two-dimensional states px,py.
std::string estimates_to_csv(const EstimateSet& estimates);
EstimateSet estimates_from_csv(const std::string& csv);

std::string diagnostics_to_csv(std::span<const StepDiagnostics> diags);

}  // namespace rfs::io
