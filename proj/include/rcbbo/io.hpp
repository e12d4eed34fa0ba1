#pragma once

#include <filesystem>

#include <json.hpp>

#include "rcbbo/cost.hpp"
#include "rcbbo/model.hpp"
#include "rcbbo/settings.hpp"

namespace rcbbo {

using Json = nlohmann::ordered_json;

/// Reads and parses a JSON file; ConfigError names the path on failure.
Json read_json(const std::filesystem::path& path);

/// Without a "combinations" array, 1.2·dead + 1.6·live (strength) and
/// dead + live (service) are generated from the cases present.
StructuralModel parse_model(const Json& j);
DesignVariableSpec parse_spec(const Json& j);
SoilProfile parse_soil(const Json& j);
UnitCosts parse_costs(const Json& j);
/// Every field optional; unknown keys are rejected.
DesignSettings parse_settings(const Json& j);

StructuralModel load_model(const std::filesystem::path& path);
DesignVariableSpec load_spec(const std::filesystem::path& path);
SoilProfile load_soil(const std::filesystem::path& path);
UnitCosts load_costs(const std::filesystem::path& path);

}  // namespace rcbbo
