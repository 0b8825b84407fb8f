#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "bearloc/localizability.hpp"
#include "bearloc/network.hpp"
#include "bearloc/sensitivity.hpp"

namespace bearloc {

/// Parses the network file format:
/// { "dimension": d,
///   "nodes": [{"id": "...", "position": [...], "anchor": bool}, ...],
///   "edges": [["id1","id2"], ...] }
/// Directed edge lists are accepted; followers may omit "position" (treated
/// as unknown, origin placeholder) — their ids are returned in
/// missing_positions.
struct LoadedNetwork {
  NetworkSpec spec;
  std::vector<std::string> missing_positions;
};

LoadedNetwork parse_network(const nlohmann::json& j);
LoadedNetwork load_network(const std::string& path);

nlohmann::json to_json(const NetworkSpec& spec);

/// FNV-1a hash of a file's bytes, hex-encoded; embedded in every report for
/// reproducibility.
std::string file_digest(const std::string& path);

nlohmann::json report_to_json(const LocalizabilityReport& report,
                              const Network& net);

}  // namespace bearloc
