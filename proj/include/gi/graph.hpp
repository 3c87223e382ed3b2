// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gi {

using Matrix = Eigen::MatrixXd;

/// Undirected simple graph stored as a dense symmetric 0/1 adjacency matrix
/// (double entries, exactly 0.0 or 1.0; zero diagonal). Immutable after
/// construction.
class Graph {
 public:
  Graph() = default;

  /// n isolated vertices; n >= 1.
  explicit Graph(int n);

  /// Validates symmetry, zero diagonal and exact 0/1 entries.
  static Graph from_adjacency(const Matrix& adj);

  /// Builds from an edge list; duplicate edges collapse, self loops are
  /// rejected, endpoints must lie in [0, n).
  static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges);

  int size() const { return static_cast<int>(adj_.rows()); }

  /// Number of directed edges, i.e. the count of ones in the adjacency
  /// matrix (twice the undirected edge count).
  int directed_edge_count() const { return m_directed_; }

  bool has_edge(int u, int v) const { return adj_(u, v) != 0.0; }
  int degree(int v) const;
  const Matrix& adjacency() const { return adj_; }

  bool operator==(const Graph& other) const;

 private:
  Matrix adj_;
  int m_directed_ = 0;
};

/// Permutation of {0,...,n-1}; p(i) is the image of i. Validated bijection.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> images);
  static Permutation identity(int n);

  int size() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_[i]; }
  const std::vector<int>& images() const { return images_; }

  Permutation inverse() const;

  /// Row-selection matrix P with P(i, p(i)) = 1, so (P A P^T)(i, j) =
  /// A(p(i), p(j)); apply_permutation(g, p) corresponds to P^T A P.
  Matrix matrix() const;

  bool operator==(const Permutation& other) const {
    return images_ == other.images_;
  }

 private:
  std::vector<int> images_;
};

/// Parses the graph6 format (header byte(s) + big-endian 6-bit groups of the
/// column-major upper triangle, each offset by 63). Supports 1 <= n <= 258047
/// and rejects the 8-byte size header. Trailing whitespace is ignored;
/// malformed input throws std::invalid_argument.
Graph parse_graph6(std::string_view text);

/// Inverse of parse_graph6; emits the canonical header (short form for
/// n <= 62) with zero padding bits and no trailing newline.
std::string write_graph6(const Graph& g);

/// Parses "n m" followed by m lines "u v" (0-based endpoints). Duplicate
/// edges collapse; self loops and out-of-range vertices throw.
Graph parse_edge_list(std::string_view text);

/// Relabels g by p: result has an edge (p(u), p(v)) for every edge (u, v).
Graph apply_permutation(const Graph& g, const Permutation& p);

/// Toggles `count` distinct vertex pairs chosen by the seed (independent of
/// the current adjacency, so the operation is an involution for a fixed seed
/// and count). The result differs from g in exactly 2*count entries.
Graph flip_edges(const Graph& g, int count, std::uint64_t seed);

/// Vertex degrees sorted ascending.
std::vector<int> degree_sequence(const Graph& g);

Permutation random_permutation(int n, std::uint64_t seed);

/// Random d-regular graph via the pairing model with rejection (retries
/// until simple); n*d must be even, 0 <= d < n.
Graph random_regular_graph(int n, int degree, std::uint64_t seed);

/// Erdos-Renyi G(n, p).
Graph random_gnp(int n, double p, std::uint64_t seed);

/// Number of adjacency entries where the relabelling of a by p disagrees
/// with b, i.e. ||P A P^T - B||_F^2 evaluated exactly in integers.
int hamming_distance(const Graph& a, const Graph& b, const Permutation& p);

/// Exact integer check that p maps a onto b.
bool is_isomorphism(const Graph& a, const Graph& b, const Permutation& p);

}  // namespace gi
