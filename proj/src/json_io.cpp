#include "bearloc/json_io.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace bearloc {

LoadedNetwork parse_network(const nlohmann::json& j) {
  LoadedNetwork out;
  if (!j.contains("dimension") || !j.contains("nodes")) {
    throw Error("network file needs 'dimension' and 'nodes'");
  }
  out.spec.dimension = j.at("dimension").get<int>();
  for (const auto& jn : j.at("nodes")) {
    NodeSpec node;
    node.id = jn.at("id").get<std::string>();
    node.anchor = jn.value("anchor", false);
    if (jn.contains("position")) {
      auto coords = jn.at("position").get<std::vector<double>>();
      node.position = Eigen::Map<Eigen::VectorXd>(
          coords.data(), static_cast<Eigen::Index>(coords.size()));
    } else {
      if (node.anchor) {
        throw Error("anchor '" + node.id + "' must carry a position");
      }
      node.position = Eigen::VectorXd::Zero(out.spec.dimension);
      out.missing_positions.push_back(node.id);
    }
    out.spec.nodes.push_back(std::move(node));
  }
  if (!out.missing_positions.empty()) {
    // Distinct placeholders outside the bounding box of the known positions,
    // so the collocation check cannot trip on the unknowns.
    double extent = 0.0;
    for (const auto& node : out.spec.nodes) {
      extent = std::max(extent, node.position.cwiseAbs().maxCoeff());
    }
    int k = 0;
    for (auto& node : out.spec.nodes) {
      if (std::find(out.missing_positions.begin(), out.missing_positions.end(),
                    node.id) != out.missing_positions.end()) {
        node.position[0] = 2.0 * extent + 1.0 + k++;
      }
    }
  }
  for (const auto& je : j.value("edges", nlohmann::json::array())) {
    out.spec.edges.emplace_back(je.at(0).get<std::string>(),
                                je.at(1).get<std::string>());
  }
  return out;
}

LoadedNetwork load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  nlohmann::json j;
  in >> j;
  return parse_network(j);
}

nlohmann::json to_json(const NetworkSpec& spec) {
  nlohmann::json j;
  j["dimension"] = spec.dimension;
  j["nodes"] = nlohmann::json::array();
  for (const auto& node : spec.nodes) {
    nlohmann::json jn;
    jn["id"] = node.id;
    jn["anchor"] = node.anchor;
    jn["position"] = std::vector<double>(
        node.position.data(), node.position.data() + node.position.size());
    j["nodes"].push_back(jn);
  }
  j["edges"] = nlohmann::json::array();
  for (const auto& [a, b] : spec.edges) {
    j["edges"].push_back({a, b});
  }
  return j;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::uint64_t hash = 1469598103934665603ull;  // FNV-1a 64-bit
  char c;
  while (in.get(c)) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << hash;
  return os.str();
}

nlohmann::json report_to_json(const LocalizabilityReport& report,
                              const Network& net) {
  nlohmann::json j;
  j["verdict"] = to_string(report.verdict);
  j["lambda_min_Bff"] = report.lambda_min_Bff;
  j["rank_B"] = report.rank_B;
  j["nullity_B"] = report.nullity_B;
  j["anchor_lower_bound"] = report.anchor_lower_bound;
  j["anchor_count"] = net.anchor_count();
  j["follower_count"] = net.follower_count();
  j["ibr"] = report.ibr_G;
  j["ibr_augmented"] = report.ibr_augmented;
  j["condition_agreement"] = report.condition_agreement;
  j["tolerances"] = {{"tau_rank", report.tau_rank},
                     {"tau_loc", report.tau_loc}};
  if (report.witness) {
    const int d = net.dimension();
    nlohmann::json w = nlohmann::json::object();
    for (int i = 0; i < net.node_count(); ++i) {
      Eigen::VectorXd v = report.witness->segment(d * i, d);
      w[net.id_of(i)] =
          std::vector<double>(v.data(), v.data() + v.size());
    }
    j["witness"] = w;
  }
  return j;
}

}  // namespace bearloc
