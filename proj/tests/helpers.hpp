// SPDX-License-Identifier: Apache-2.0
//
// Named graphs and small builders shared by the test suites.
#pragma once

#include <utility>
#include <vector>

#include "gi/graph.hpp"
#include "gi/rng.hpp"

namespace testing_helpers {

inline gi::Graph path_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return gi::Graph::from_edges(n, edges);
}

inline gi::Graph cycle_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return gi::Graph::from_edges(n, edges);
}

inline gi::Graph complete_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  return gi::Graph::from_edges(n, edges);
}

/// K_{1,leaves} with the center at vertex 0.
inline gi::Graph star_graph(int leaves) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= leaves; ++i) edges.emplace_back(0, i);
  return gi::Graph::from_edges(leaves + 1, edges);
}

/// Outer 5-cycle 0..4, inner pentagram 5..9, spokes i - i+5.
inline gi::Graph petersen() {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < 5; ++i) {
    edges.emplace_back(i, (i + 1) % 5);
    edges.emplace_back(i, i + 5);
    edges.emplace_back(5 + i, 5 + (i + 2) % 5);
  }
  return gi::Graph::from_edges(10, edges);
}

/// K3 on {0,1,2} plus K3 on {3,4,5}: co-regular with C6 but not isomorphic.
inline gi::Graph two_triangles() {
  return gi::Graph::from_edges(
      6, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}});
}

/// Random labelled tree: each vertex i >= 1 attaches to a uniform earlier
/// vertex. Degree sequences are typically irregular, which suits heuristics.
inline gi::Graph random_tree(int n, std::uint64_t seed) {
  gi::Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i < n; ++i) {
    edges.emplace_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(i))), i);
  }
  return gi::Graph::from_edges(n, edges);
}

}  // namespace testing_helpers
