#pragma once

// Shared test networks. The named fixtures cover the canonical
// geometry (squares, nested triangles, cubes); the qualitative verdicts are
// the assertions.

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "bearloc/network.hpp"

namespace fixtures {

using bearloc::Network;
using bearloc::NetworkSpec;
using bearloc::NodeSpec;

inline Eigen::VectorXd vec2(double x, double y) {
  Eigen::VectorXd v(2);
  v << x, y;
  return v;
}

inline Eigen::VectorXd vec3(double x, double y, double z) {
  Eigen::VectorXd v(3);
  v << x, y, z;
  return v;
}

inline NetworkSpec spec2d(
    const std::vector<std::tuple<std::string, double, double, bool>>& nodes,
    const std::vector<std::pair<std::string, std::string>>& edges) {
  NetworkSpec s;
  s.dimension = 2;
  for (const auto& [id, x, y, anchor] : nodes) {
    s.nodes.push_back({id, vec2(x, y), anchor});
  }
  s.edges = edges;
  return s;
}

// Square 4-cycle with the two anchors on one side; the followers can slide
// sideways, so it is not localizable.
inline Network square_cycle() {
  return Network::from_spec(spec2d({{"1", 0, 0, true},
                                    {"2", 0, -3, true},
                                    {"3", 3, -3, false},
                                    {"4", 3, 0, false}},
                                   {{"1", "2"}, {"2", "3"}, {"3", "4"}, {"4", "1"}}));
}

// Triangle with two anchors: infinitesimally bearing rigid and localizable.
inline Network triangle() {
  return Network::from_spec(spec2d(
      {{"1", 0, 0, true}, {"2", 4, 0, true}, {"3", 2, 3, false}},
      {{"1", "2"}, {"2", "3"}, {"3", "1"}}));
}

// Square plus one diagonal, anchors on the bottom side.
inline Network braced_square() {
  return Network::from_spec(spec2d({{"1", 0, 0, false},
                                    {"2", 4, 0, false},
                                    {"3", 4, -4, true},
                                    {"4", 0, -4, true}},
                                   {{"1", "2"},
                                    {"2", "3"},
                                    {"3", "4"},
                                    {"4", "1"},
                                    {"2", "4"}}));
}

// Two nested triangles joined vertex-to-vertex, anchors 1, 2, 6.
inline Network nested_triangles() {
  const double c = std::sqrt(3.0) / 2.0;
  NetworkSpec s;
  s.dimension = 2;
  s.nodes = {{"1", vec2(-c * 3, -1.5), true},  {"2", vec2(c * 3, -1.5), true},
             {"3", vec2(0, 3), false},         {"4", vec2(-c * 1.5, -0.75), false},
             {"5", vec2(c * 1.5, -0.75), false}, {"6", vec2(0, 1.5), true}};
  s.edges = {{"1", "2"}, {"2", "3"}, {"3", "1"}, {"4", "5"}, {"5", "6"},
             {"6", "4"}, {"1", "4"}, {"2", "5"}, {"3", "6"}};
  return Network::from_spec(s);
}

inline std::vector<std::pair<std::string, std::string>> grid_edges() {
  return {{"1", "2"}, {"2", "3"}, {"3", "4"}, {"4", "1"}, {"1", "5"},
          {"5", "4"}, {"2", "6"}, {"6", "3"}, {"5", "6"}};
}

inline std::vector<std::tuple<std::string, double, double, bool>> grid_nodes(
    bool a1, bool a2, bool a3, bool a4, bool a5, bool a6) {
  return {{"1", 0, 0, a1},       {"2", 5, 0, a2}, {"3", 5, 4, a3},
          {"4", 0, 4, a4},       {"5", 5.0 / 3.0, 2, a5},
          {"6", 10.0 / 3.0, 2, a6}};
}

// Outer square with an inner bar, anchors at opposite corners: localizable.
inline Network grid_opposite_anchors() {
  return Network::from_spec(spec2d(
      grid_nodes(true, false, false, false, false, true), grid_edges()));
}

// Same graph with both anchors on the bottom edge: the top half swings.
inline Network grid_bottom_anchors() {
  return Network::from_spec(spec2d(
      grid_nodes(true, true, false, false, false, false), grid_edges()));
}

// Follower on the segment between two anchors; it can slide along the line.
inline Network collinear_between_anchors() {
  return Network::from_spec(spec2d(
      {{"1", 0, 0, true}, {"2", 2.5, 0, false}, {"3", 5, 0, true}},
      {{"1", "2"}, {"2", "3"}, {"1", "3"}}));
}

// Plain square 4-cycle, anchors on the bottom side.
inline Network square_bottom_anchors() {
  return Network::from_spec(spec2d({{"1", 0, 0, false},
                                    {"2", 4, 0, false},
                                    {"3", 4, -4, true},
                                    {"4", 0, -4, true}},
                                   {{"1", "2"}, {"2", "3"}, {"3", "4"}, {"4", "1"}}));
}

// Triangular prism in 3-D, anchors 2 and 6 (one per triangle).
inline Network prism() {
  NetworkSpec s;
  s.dimension = 3;
  for (int k = 0; k < 3; ++k) {
    const double a = M_PI / 2 + k * 2 * M_PI / 3;
    s.nodes.push_back({std::to_string(k + 1),
                       vec3(std::cos(a), std::sin(a), 0.0), k == 1});
    s.nodes.push_back({std::to_string(k + 4),
                       vec3(std::cos(a), std::sin(a), 1.3), k == 2});
  }
  s.edges = {{"1", "2"}, {"2", "3"}, {"3", "1"}, {"4", "5"}, {"5", "6"},
             {"6", "4"}, {"1", "4"}, {"2", "5"}, {"3", "6"}};
  return Network::from_spec(s);
}

inline NetworkSpec cube_spec(const std::vector<std::string>& anchor_ids) {
  const double pts[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                            {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
  NetworkSpec s;
  s.dimension = 3;
  for (int k = 0; k < 8; ++k) {
    std::string id = std::to_string(k + 1);
    bool anchor = std::find(anchor_ids.begin(), anchor_ids.end(), id) !=
                  anchor_ids.end();
    s.nodes.push_back({id, vec3(pts[k][0], pts[k][1], pts[k][2]), anchor});
  }
  s.edges = {{"1", "2"}, {"2", "3"}, {"3", "4"}, {"4", "1"},
             {"5", "6"}, {"6", "7"}, {"7", "8"}, {"8", "5"},
             {"1", "5"}, {"2", "6"}, {"3", "7"}, {"4", "8"}};
  return s;
}

// Unit cube (12 edges), anchors 4 and 6 on a space diagonal: localizable
// with lambda_min(B_ff) ~ 0.586.
inline Network cube_diagonal_anchors() { return Network::from_spec(cube_spec({"4", "6"})); }

// Same cube with two adjacent anchors on one face: not localizable.
inline Network cube_adjacent_anchors() {
  return Network::from_spec(cube_spec({"3", "4"}));
}

// Two triangles sharing an edge path with three collinear anchors:
// localizable although the augmented network is not bearing rigid.
inline Network collinear_anchors() {
  return Network::from_spec(spec2d({{"1", 1, 0, true},
                                    {"2", 4, 0, true},
                                    {"3", 4, 4, false},
                                    {"4", 8, 0, true},
                                    {"5", 8, 4, false}},
                                   {{"1", "3"}, {"3", "2"}, {"1", "2"},
                                    {"2", "4"}, {"4", "5"}, {"5", "3"}}));
}

// Hexagonal pyramid in 3-D, anchors at two adjacent base vertices.
inline Network hexagon_pyramid() {
  NetworkSpec s;
  s.dimension = 3;
  for (int k = 0; k < 6; ++k) {
    const double a = k * M_PI / 3;
    s.nodes.push_back({std::to_string(k + 1),
                       vec3(std::cos(a), std::sin(a), 0.0), k < 2});
  }
  s.nodes.push_back({"7", vec3(0, 0, 1.5), false});
  for (int k = 0; k < 6; ++k) {
    s.edges.emplace_back(std::to_string(k + 1), std::to_string((k + 1) % 6 + 1));
    s.edges.emplace_back(std::to_string(k + 1), "7");
  }
  return Network::from_spec(s);
}

inline std::vector<Network> localizable_fixtures() {
  return {triangle(),        braced_square(),
          nested_triangles(), grid_opposite_anchors(),
          prism(),            cube_diagonal_anchors(),
          collinear_anchors(), hexagon_pyramid()};
}

inline std::vector<Network> non_localizable_fixtures() {
  return {square_cycle(), collinear_between_anchors(), square_bottom_anchors(),
          grid_bottom_anchors(), cube_adjacent_anchors()};
}

/// Random connected network: spanning tree plus extra edges, uniform
/// positions, the requested number of random anchors.
inline Network random_network(int d, int n, int n_a, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  NetworkSpec s;
  s.dimension = d;
  std::vector<int> anchors(n, 0);
  {
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    for (int k = 0; k < n_a; ++k) anchors[order[k]] = 1;
  }
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd p(d);
    for (int t = 0; t < d; ++t) p[t] = coord(rng);
    s.nodes.push_back({"n" + std::to_string(i), p, anchors[i] == 1});
  }
  std::set<std::pair<int, int>> edges;
  for (int i = 1; i < n; ++i) {
    int j = static_cast<int>(rng() % i);
    edges.insert({j, i});
  }
  const int extra = static_cast<int>(rng() % static_cast<unsigned>(n + 1));
  for (int k = 0; k < extra; ++k) {
    int i = static_cast<int>(rng() % n);
    int j = static_cast<int>(rng() % n);
    if (i == j) continue;
    edges.insert({std::min(i, j), std::max(i, j)});
  }
  for (const auto& [i, j] : edges) {
    s.edges.emplace_back("n" + std::to_string(i), "n" + std::to_string(j));
  }
  return Network::from_spec(s);
}

}  // namespace fixtures
