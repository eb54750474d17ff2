#pragma once

#include <string>
#include <vector>

#include "netarm/scenario.hpp"

namespace netarm::io {

/// Parses a scenario from a JSON file. Throws ConfigError naming the
/// offending field on any missing or ill-typed entry.
sim::ScenarioConfig load_config(const std::string& path);

/// Same, from an in-memory JSON document.
sim::ScenarioConfig parse_config(const std::string& json_text);

/// Serializes a config with every field explicit; parsing the result yields
/// a scenario that runs identically.
std::string emit_config(const sim::ScenarioConfig& cfg);

/// Invariant checks beyond parsing: SPD gain matrices, spanning tree,
/// inertia positive-definiteness, step sizes. Returns one message per
/// violation; empty means the scenario is well-posed.
std::vector<std::string> validate_config(const sim::ScenarioConfig& cfg);

}  // namespace netarm::io
