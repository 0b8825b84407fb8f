#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bearloc/errors.hpp"

namespace bearloc {

struct NodeSpec {
  std::string id;
  Eigen::VectorXd position;
  bool anchor = false;
};

/// Raw, possibly unvalidated description of a network. Edge lists may be
/// directed; validation works on the symmetrized edge set.
struct NetworkSpec {
  int dimension = 2;
  std::vector<NodeSpec> nodes;
  std::vector<std::pair<std::string, std::string>> edges;
};

/// Closes the edge set under reversal and drops duplicates. Idempotent.
NetworkSpec symmetrize(NetworkSpec spec);

/// Adds an edge between every pair of anchors. Idempotent; commutes with
/// symmetrize.
NetworkSpec augment_anchors(NetworkSpec spec);

struct ValidationIssue {
  enum class Code {
    BadDimension,
    DuplicateId,
    DimensionMismatch,
    CollocatedNodes,
    DanglingEdge,
    SelfLoop,
    NoFollowers,
  };
  Code code;
  std::string message;
};

/// Returns every violated invariant of the spec; empty means valid.
std::vector<ValidationIssue> check_spec(const NetworkSpec& spec);

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<ValidationIssue> issues);
  const std::vector<ValidationIssue>& issues() const { return issues_; }

 private:
  std::vector<ValidationIssue> issues_;
};

/// Undirected edge in internal indices, tail < head. The orientation rule
/// (tail = smaller internal index) fixes the incidence and rigidity matrix
/// row signs.
struct Edge {
  int tail = 0;
  int head = 0;
};

/// Validated immutable network. Internally the anchors occupy indices
/// 0..n_a-1 and the followers n_a..n-1, which is the ordering the block
/// partition of the bearing Laplacian assumes. External ids are preserved
/// and used in all reports.
class Network {
 public:
  /// Symmetrizes and validates; throws ValidationError listing every
  /// violated invariant.
  static Network from_spec(const NetworkSpec& spec);

  int dimension() const { return d_; }
  int node_count() const { return static_cast<int>(ids_.size()); }
  int anchor_count() const { return n_a_; }
  int follower_count() const { return node_count() - n_a_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  bool is_anchor(int internal_index) const { return internal_index < n_a_; }

  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::vector<int>>& neighbors() const { return neighbors_; }

  /// Position of one node (length d).
  Eigen::VectorXd position(int internal_index) const;
  /// Stacked p = [p_a; p_f], length d*n.
  const Eigen::VectorXd& stacked_positions() const { return p_; }
  Eigen::VectorXd anchor_positions() const { return p_.head(d_ * n_a_); }
  Eigen::VectorXd follower_positions() const {
    return p_.tail(d_ * follower_count());
  }

  const std::string& id_of(int internal_index) const {
    return ids_[internal_index];
  }
  int index_of(const std::string& id) const;
  bool has_id(const std::string& id) const {
    return index_by_id_.count(id) > 0;
  }

  /// Collocation tolerance, relative to the coordinate magnitudes.
  double position_tolerance() const { return tau_pos_; }

  /// External form (anchors first, undirected canonical edges).
  NetworkSpec to_spec() const;

 private:
  Network() = default;

  int d_ = 0;
  int n_a_ = 0;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, int> index_by_id_;
  Eigen::VectorXd p_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> neighbors_;
  double tau_pos_ = 0.0;
};

}  // namespace bearloc
