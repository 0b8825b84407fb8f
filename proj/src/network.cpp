#include "bearloc/network.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace bearloc {

namespace {

std::set<std::pair<std::string, std::string>> canonical_edges(
    const std::vector<std::pair<std::string, std::string>>& edges) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& [a, b] : edges) {
    out.insert(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
  }
  return out;
}

}  // namespace

NetworkSpec symmetrize(NetworkSpec spec) {
  auto canon = canonical_edges(spec.edges);
  spec.edges.assign(canon.begin(), canon.end());
  return spec;
}

NetworkSpec augment_anchors(NetworkSpec spec) {
  auto canon = canonical_edges(spec.edges);
  std::vector<std::string> anchor_ids;
  for (const auto& node : spec.nodes) {
    if (node.anchor) anchor_ids.push_back(node.id);
  }
  for (std::size_t i = 0; i < anchor_ids.size(); ++i) {
    for (std::size_t j = i + 1; j < anchor_ids.size(); ++j) {
      const auto& a = anchor_ids[i];
      const auto& b = anchor_ids[j];
      canon.insert(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
    }
  }
  spec.edges.assign(canon.begin(), canon.end());
  return spec;
}

std::vector<ValidationIssue> check_spec(const NetworkSpec& spec) {
  using Code = ValidationIssue::Code;
  std::vector<ValidationIssue> issues;
  auto add = [&](Code code, const std::string& msg) {
    issues.push_back({code, msg});
  };

  if (spec.dimension < 2) {
    add(Code::BadDimension,
        "dimension must be >= 2, got " + std::to_string(spec.dimension));
  }

  std::set<std::string> seen;
  for (const auto& node : spec.nodes) {
    if (!seen.insert(node.id).second) {
      add(Code::DuplicateId, "duplicate node id '" + node.id + "'");
    }
    if (node.position.size() != spec.dimension) {
      add(Code::DimensionMismatch,
          "node '" + node.id + "' has position of length " +
              std::to_string(node.position.size()) + ", expected " +
              std::to_string(spec.dimension));
    }
  }

  double max_coord = 0.0;
  for (const auto& node : spec.nodes) {
    if (node.position.size() > 0) {
      max_coord = std::max(max_coord, node.position.cwiseAbs().maxCoeff());
    }
  }
  const double tau_pos = 1e-12 * (1.0 + max_coord);
  for (std::size_t i = 0; i < spec.nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < spec.nodes.size(); ++j) {
      const auto& a = spec.nodes[i];
      const auto& b = spec.nodes[j];
      if (a.position.size() == b.position.size() &&
          (a.position - b.position).norm() <= tau_pos) {
        add(Code::CollocatedNodes,
            "nodes '" + a.id + "' and '" + b.id + "' are collocated");
      }
    }
  }

  for (const auto& [a, b] : spec.edges) {
    if (seen.count(a) == 0) {
      add(Code::DanglingEdge, "edge references unknown id '" + a + "'");
    }
    if (seen.count(b) == 0) {
      add(Code::DanglingEdge, "edge references unknown id '" + b + "'");
    }
    if (a == b) {
      add(Code::SelfLoop, "self-loop on node '" + a + "'");
    }
  }

  bool has_follower = false;
  for (const auto& node : spec.nodes) {
    if (!node.anchor) has_follower = true;
  }
  if (!has_follower) {
    add(Code::NoFollowers, "network has no followers to localize");
  }

  return issues;
}

ValidationError::ValidationError(std::vector<ValidationIssue> issues)
    : Error([&issues] {
        std::ostringstream os;
        os << "invalid network spec:";
        for (const auto& issue : issues) os << "\n  " << issue.message;
        return os.str();
      }()),
      issues_(std::move(issues)) {}

Network Network::from_spec(const NetworkSpec& raw) {
  NetworkSpec spec = symmetrize(raw);
  auto issues = check_spec(spec);
  if (!issues.empty()) throw ValidationError(std::move(issues));

  Network net;
  net.d_ = spec.dimension;

  // Anchors first, stable within each group.
  std::vector<int> order;
  for (std::size_t i = 0; i < spec.nodes.size(); ++i) {
    if (spec.nodes[i].anchor) order.push_back(static_cast<int>(i));
  }
  net.n_a_ = static_cast<int>(order.size());
  for (std::size_t i = 0; i < spec.nodes.size(); ++i) {
    if (!spec.nodes[i].anchor) order.push_back(static_cast<int>(i));
  }

  const int n = static_cast<int>(spec.nodes.size());
  net.p_.resize(net.d_ * n);
  for (int k = 0; k < n; ++k) {
    const auto& node = spec.nodes[order[k]];
    net.ids_.push_back(node.id);
    net.index_by_id_[node.id] = k;
    net.p_.segment(net.d_ * k, net.d_) = node.position;
  }

  net.neighbors_.resize(n);
  for (const auto& [a, b] : spec.edges) {
    int i = net.index_by_id_.at(a);
    int j = net.index_by_id_.at(b);
    if (i > j) std::swap(i, j);
    net.edges_.push_back({i, j});
    net.neighbors_[i].push_back(j);
    net.neighbors_[j].push_back(i);
  }
  std::sort(net.edges_.begin(), net.edges_.end(),
            [](const Edge& a, const Edge& b) {
              return std::tie(a.tail, a.head) < std::tie(b.tail, b.head);
            });
  for (auto& nbrs : net.neighbors_) std::sort(nbrs.begin(), nbrs.end());

  const double max_coord =
      net.p_.size() > 0 ? net.p_.cwiseAbs().maxCoeff() : 0.0;
  net.tau_pos_ = 1e-12 * (1.0 + max_coord);
  return net;
}

Eigen::VectorXd Network::position(int internal_index) const {
  return p_.segment(d_ * internal_index, d_);
}

int Network::index_of(const std::string& id) const {
  auto it = index_by_id_.find(id);
  if (it == index_by_id_.end()) {
    throw Error("unknown node id '" + id + "'");
  }
  return it->second;
}

NetworkSpec Network::to_spec() const {
  NetworkSpec spec;
  spec.dimension = d_;
  for (int i = 0; i < node_count(); ++i) {
    spec.nodes.push_back({ids_[i], position(i), is_anchor(i)});
  }
  for (const auto& e : edges_) {
    spec.edges.emplace_back(ids_[e.tail], ids_[e.head]);
  }
  return spec;
}

}  // namespace bearloc
