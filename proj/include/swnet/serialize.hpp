#pragma once

#include <json.hpp>

#include "swnet/circuit.hpp"
#include "swnet/network.hpp"
#include "swnet/noise.hpp"

namespace swnet {

using json = nlohmann::json;

json to_json(const ShortcutSet& links);
ShortcutSet shortcuts_from_json(const json& j);

json to_json(const DisorderField& field);
DisorderField disorder_from_json(const json& j);

json to_json(const NoiseParams& noise);
NoiseParams noise_from_json(const json& j);

json to_json(const Gate& gate);
Gate gate_from_json(const json& j);

/// Gate list, builder metadata and counts. Round-trips exactly.
json to_json(const GateProgram& program);
GateProgram program_from_json(const json& j);

json to_json(const TrotterStep& step);

} // namespace swnet
