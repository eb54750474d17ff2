#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netarm/scenario.hpp"

namespace netarm::io {

enum class PresetKind { kSingleRun, kTeleopSweep };

struct Preset {
  std::string name;
  PresetKind kind = PresetKind::kSingleRun;
  sim::ScenarioConfig config;
};

std::vector<std::string> preset_names();
std::optional<Preset> find_preset(std::string_view name);

}  // namespace netarm::io
