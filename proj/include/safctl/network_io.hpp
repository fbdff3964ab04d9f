#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "safctl/network.hpp"

namespace safctl {

/// Parses the raw network document (keys: links, turns, junctions, cycle),
/// validates it, and builds the derived matrices. Unknown keys are rejected.
TrafficNetwork network_from_json(const nlohmann::json& doc);

/// Reverse of network_from_json; only raw data is emitted, never b_u / b_g.
/// Serialization is canonical (ids ascending, fixed key order), so
/// save(load(f)) reproduces a canonically written file byte for byte.
nlohmann::ordered_json network_to_json(const TrafficNetwork& net);

TrafficNetwork load_network(const std::string& path);
void save_network(const TrafficNetwork& net, const std::string& path);

/// Canonical text form used by save_network (dump with 2-space indent plus
/// trailing newline).
std::string network_to_string(const TrafficNetwork& net);

}  // namespace safctl
