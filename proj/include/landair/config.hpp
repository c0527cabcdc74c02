#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "landair/dynamics.hpp"
#include "landair/endurance.hpp"
#include "landair/evaluation.hpp"
#include "landair/planner.hpp"

namespace landair::config {

using json = nlohmann::ordered_json;

json load_json(const std::filesystem::path& path);

/// Applies one `dotted.key=value` override onto a JSON document. The value is
/// parsed as JSON when possible, otherwise taken as a string.
void apply_override(json& document, const std::string& key_value);
void apply_overrides(json& document, const std::vector<std::string>& overrides);

endurance::WeightBreakdown weights_from_json(const json& j);
endurance::PowerBudget power_budget_from_json(const json& j);
powertrain::BatteryModel battery_from_json(const json& j);
powertrain::ThrustCurve curve_from_json(const json& j);
powertrain::PowerTrainModel powertrain_from_json(const json& j);

/// Assembles the endurance configuration from a robot spec document
/// (sections: endurance, battery_model, powertrain, power_budget).
endurance::EnduranceConfig endurance_config_from_json(const json& robot_spec);

dynamics::SimulationSpec simulation_spec_from_json(const json& robot_spec);

planner::CostModel cost_model_from_json(const json& j);

std::vector<evaluation::FleetRecord> fleet_from_json(const json& j);
evaluation::WeightSet weight_set_from_json(const json& j);

json curve_to_json(const powertrain::ThrustCurve& curve);

}  // namespace landair::config
