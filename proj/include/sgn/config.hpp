#pragma once

#include <string>
#include <vector>

#include "sgn/scenario.hpp"

namespace sgn
{

/// Parse INI text with sections params, grid, scenario, step and checks.
/// Each override reads "section.key=value" and replaces or adds that key
/// before interpretation. Unknown sections or keys are config errors.
ScenarioConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});

ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// Complete INI rendering of cfg (every key, 17 significant digits);
/// parse_config(to_ini(cfg)) reproduces cfg.
std::string to_ini(const ScenarioConfig& cfg);

/// "0.2,0.1 0.05" -> {0.2, 0.1, 0.05}; separators are commas and/or spaces.
std::vector<double> parse_number_list(const std::string& s);

} // namespace sgn
