#pragma once

#include <string>

#include <json.hpp>

#include "dlcfar/scenario.hpp"

namespace dlcfar {

struct ScenarioDocument {
  Scenario scenario;
  TargetModel target = NoTarget{};
};

// Field layout is documented in README.md. Errors are ConfigError
// naming the offending field.
ScenarioDocument scenario_from_json(const nlohmann::json& doc);
ScenarioDocument parse_scenario(const std::string& text);
ScenarioDocument load_scenario(const std::string& path);

nlohmann::json to_json(const Scenario& scenario);
nlohmann::json to_json(const ScenarioDocument& doc);

}  // namespace dlcfar
