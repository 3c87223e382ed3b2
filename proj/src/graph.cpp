// SPDX-License-Identifier: Apache-2.0
#include "gi/graph.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "gi/rng.hpp"

namespace gi {

namespace {

constexpr int kGraph6Bias = 63;
constexpr int kGraph6MaxByte = 126;
constexpr int kGraph6ShortMax = 62;
constexpr int kGraph6LongMax = 258047;

void check_vertex_count(int n) {
  if (n < 1) throw std::invalid_argument("graph must have at least one vertex");
}

/// Lexicographic index of unordered pairs: (0,1),(0,2),...,(0,n-1),(1,2),...
std::pair<int, int> pair_from_index(int n, long long idx) {
  long long remaining = idx;
  for (int i = 0; i < n - 1; ++i) {
    const long long row_pairs = n - 1 - i;
    if (remaining < row_pairs) return {i, i + 1 + static_cast<int>(remaining)};
    remaining -= row_pairs;
  }
  throw std::logic_error("pair index out of range");
}

}  // namespace

Graph::Graph(int n) {
  check_vertex_count(n);
  adj_ = Matrix::Zero(n, n);
}

Graph Graph::from_adjacency(const Matrix& adj) {
  if (adj.rows() != adj.cols()) {
    throw std::invalid_argument("adjacency matrix must be square");
  }
  check_vertex_count(static_cast<int>(adj.rows()));
  const int n = static_cast<int>(adj.rows());
  Graph g(n);
  int ones = 0;
  for (int i = 0; i < n; ++i) {
    if (adj(i, i) != 0.0) {
      throw std::invalid_argument("adjacency matrix must have a zero diagonal");
    }
    for (int j = 0; j < n; ++j) {
      const double v = adj(i, j);
      if (v != 0.0 && v != 1.0) {
        throw std::invalid_argument("adjacency entries must be exactly 0 or 1");
      }
      if (v != adj(j, i)) {
        throw std::invalid_argument("adjacency matrix must be symmetric");
      }
      if (v == 1.0) ++ones;
    }
  }
  g.adj_ = adj;
  g.m_directed_ = ones;
  return g;
}

Graph Graph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  check_vertex_count(n);
  Graph g(n);
  for (const auto& [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n) {
      throw std::invalid_argument("edge endpoint out of range");
    }
    if (u == v) throw std::invalid_argument("self loops are not allowed");
    g.adj_(u, v) = 1.0;
    g.adj_(v, u) = 1.0;
  }
  g.m_directed_ = static_cast<int>(g.adj_.sum());
  return g;
}

int Graph::degree(int v) const {
  return static_cast<int>(adj_.row(v).sum());
}

bool Graph::operator==(const Graph& other) const {
  return adj_.rows() == other.adj_.rows() && adj_ == other.adj_;
}

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  const int n = static_cast<int>(images_.size());
  check_vertex_count(n);
  std::vector<bool> seen(n, false);
  for (int v : images_) {
    if (v < 0 || v >= n || seen[v]) {
      throw std::invalid_argument("permutation images must be a bijection");
    }
    seen[v] = true;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> images(n);
  std::iota(images.begin(), images.end(), 0);
  return Permutation(std::move(images));
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(images_.size());
  for (int i = 0; i < size(); ++i) inv[images_[i]] = i;
  return Permutation(std::move(inv));
}

Matrix Permutation::matrix() const {
  Matrix p = Matrix::Zero(size(), size());
  for (int i = 0; i < size(); ++i) p(i, images_[i]) = 1.0;
  return p;
}

Graph parse_graph6(std::string_view text) {
  while (!text.empty() &&
         (text.back() == '\n' || text.back() == '\r' || text.back() == ' ')) {
    text.remove_suffix(1);
  }
  if (text.empty()) throw std::invalid_argument("graph6: empty input");
  for (char c : text) {
    if (c < kGraph6Bias || c > kGraph6MaxByte) {
      throw std::invalid_argument("graph6: byte outside the printable range 63..126");
    }
  }

  std::size_t pos = 0;
  long long n = 0;
  if (text[0] == '~') {
    if (text.size() >= 2 && text[1] == '~') {
      throw std::invalid_argument("graph6: 8-byte size header is not supported");
    }
    if (text.size() < 4) throw std::invalid_argument("graph6: truncated size header");
    n = (static_cast<long long>(text[1] - kGraph6Bias) << 12) |
        (static_cast<long long>(text[2] - kGraph6Bias) << 6) |
        static_cast<long long>(text[3] - kGraph6Bias);
    pos = 4;
  } else {
    n = text[0] - kGraph6Bias;
    pos = 1;
  }
  if (n < 1) throw std::invalid_argument("graph6: graph must have at least one vertex");
  if (n > kGraph6LongMax) throw std::invalid_argument("graph6: vertex count too large");

  const long long bits = n * (n - 1) / 2;
  const std::size_t need = static_cast<std::size_t>((bits + 5) / 6);
  const std::string_view payload = text.substr(pos);
  if (payload.size() < need) throw std::invalid_argument("graph6: payload too short");
  if (payload.size() > need) throw std::invalid_argument("graph6: trailing bytes after payload");

  Matrix adj = Matrix::Zero(n, n);
  long long k = 0;
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i, ++k) {
      const int group = payload[static_cast<std::size_t>(k / 6)] - kGraph6Bias;
      if ((group >> (5 - k % 6)) & 1) {
        adj(i, j) = 1.0;
        adj(j, i) = 1.0;
      }
    }
  }
  for (; k < static_cast<long long>(need) * 6; ++k) {
    const int group = payload[static_cast<std::size_t>(k / 6)] - kGraph6Bias;
    if ((group >> (5 - k % 6)) & 1) {
      throw std::invalid_argument("graph6: nonzero padding bits");
    }
  }
  return Graph::from_adjacency(adj);
}

std::string write_graph6(const Graph& g) {
  const long long n = g.size();
  if (n > kGraph6LongMax) {
    throw std::invalid_argument("graph6: vertex count exceeds the 3-byte size header");
  }
  std::string out;
  if (n <= kGraph6ShortMax) {
    out.push_back(static_cast<char>(kGraph6Bias + n));
  } else {
    out.push_back('~');
    out.push_back(static_cast<char>(kGraph6Bias + ((n >> 12) & 63)));
    out.push_back(static_cast<char>(kGraph6Bias + ((n >> 6) & 63)));
    out.push_back(static_cast<char>(kGraph6Bias + (n & 63)));
  }
  const long long bits = n * (n - 1) / 2;
  const std::size_t header = out.size();
  out.resize(header + static_cast<std::size_t>((bits + 5) / 6),
             static_cast<char>(kGraph6Bias));
  long long k = 0;
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i, ++k) {
      if (g.has_edge(i, j)) {
        out[header + static_cast<std::size_t>(k / 6)] += static_cast<char>(1 << (5 - k % 6));
      }
    }
  }
  return out;
}

Graph parse_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  long long n = 0, m = 0;
  if (!(in >> n >> m)) throw std::invalid_argument("edge list: missing 'n m' header");
  if (n < 1) throw std::invalid_argument("edge list: graph must have at least one vertex");
  if (m < 0) throw std::invalid_argument("edge list: negative edge count");
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long e = 0; e < m; ++e) {
    long long u = 0, v = 0;
    if (!(in >> u >> v)) throw std::invalid_argument("edge list: truncated or non-integer edge");
    if (u < 0 || u >= n || v < 0 || v >= n) {
      throw std::invalid_argument("edge list: vertex id out of range");
    }
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
  }
  std::string rest;
  if (in >> rest) throw std::invalid_argument("edge list: trailing tokens after last edge");
  return Graph::from_edges(static_cast<int>(n), edges);
}

Graph apply_permutation(const Graph& g, const Permutation& p) {
  if (p.size() != g.size()) {
    throw std::invalid_argument("permutation size must match the graph");
  }
  const int n = g.size();
  Matrix adj = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      adj(p(i), p(j)) = g.adjacency()(i, j);
    }
  }
  return Graph::from_adjacency(adj);
}

Graph flip_edges(const Graph& g, int count, std::uint64_t seed) {
  const int n = g.size();
  const long long pairs = static_cast<long long>(n) * (n - 1) / 2;
  if (count < 0) throw std::invalid_argument("flip count must be nonnegative");
  if (count > pairs) throw std::invalid_argument("flip count exceeds the number of vertex pairs");

  // Partial Fisher-Yates over pair indices: the selection depends only on
  // (n, count, seed), never on the adjacency, which makes the flip an
  // involution.
  std::vector<long long> idx(static_cast<std::size_t>(pairs));
  std::iota(idx.begin(), idx.end(), 0LL);
  Rng rng(seed);
  Matrix adj = g.adjacency();
  for (int t = 0; t < count; ++t) {
    const long long r = t + static_cast<long long>(rng.below(static_cast<std::uint64_t>(pairs - t)));
    std::swap(idx[static_cast<std::size_t>(t)], idx[static_cast<std::size_t>(r)]);
    const auto [i, j] = pair_from_index(n, idx[static_cast<std::size_t>(t)]);
    adj(i, j) = 1.0 - adj(i, j);
    adj(j, i) = adj(i, j);
  }
  return Graph::from_adjacency(adj);
}

std::vector<int> degree_sequence(const Graph& g) {
  std::vector<int> degs(g.size());
  for (int v = 0; v < g.size(); ++v) degs[v] = g.degree(v);
  std::sort(degs.begin(), degs.end());
  return degs;
}

Permutation random_permutation(int n, std::uint64_t seed) {
  check_vertex_count(n);
  std::vector<int> images(n);
  std::iota(images.begin(), images.end(), 0);
  Rng rng(seed);
  for (int t = n - 1; t > 0; --t) {
    const int r = static_cast<int>(rng.below(static_cast<std::uint64_t>(t + 1)));
    std::swap(images[t], images[r]);
  }
  return Permutation(std::move(images));
}

Graph random_regular_graph(int n, int degree, std::uint64_t seed) {
  check_vertex_count(n);
  if (degree < 0 || degree >= n) throw std::invalid_argument("degree must lie in [0, n)");
  if ((static_cast<long long>(n) * degree) % 2 != 0) {
    throw std::invalid_argument("n * degree must be even");
  }
  if (degree == 0) return Graph(n);

  Rng rng(seed);
  std::vector<int> stubs(static_cast<std::size_t>(n) * degree);
  for (int v = 0; v < n; ++v) {
    std::fill_n(stubs.begin() + static_cast<std::size_t>(v) * degree, degree, v);
  }
  constexpr int kMaxAttempts = 5000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    for (std::size_t t = stubs.size() - 1; t > 0; --t) {
      const std::size_t r = static_cast<std::size_t>(rng.below(t + 1));
      std::swap(stubs[t], stubs[r]);
    }
    Matrix adj = Matrix::Zero(n, n);
    bool simple = true;
    for (std::size_t e = 0; e + 1 < stubs.size() && simple; e += 2) {
      const int u = stubs[e], v = stubs[e + 1];
      if (u == v || adj(u, v) != 0.0) simple = false;
      adj(u, v) = 1.0;
      adj(v, u) = 1.0;
    }
    if (simple) return Graph::from_adjacency(adj);
  }
  throw std::runtime_error("pairing model failed to produce a simple graph");
}

Graph random_gnp(int n, double p, std::uint64_t seed) {
  check_vertex_count(n);
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("edge probability must lie in [0, 1]");
  Rng rng(seed);
  Matrix adj = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.unit() < p) {
        adj(i, j) = 1.0;
        adj(j, i) = 1.0;
      }
    }
  }
  return Graph::from_adjacency(adj);
}

int hamming_distance(const Graph& a, const Graph& b, const Permutation& p) {
  if (a.size() != b.size() || p.size() != a.size()) {
    throw std::invalid_argument("hamming_distance requires equal sizes");
  }
  const int n = a.size();
  int mismatches = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (a.adjacency()(i, j) != b.adjacency()(p(i), p(j))) ++mismatches;
    }
  }
  return mismatches;
}

bool is_isomorphism(const Graph& a, const Graph& b, const Permutation& p) {
  return a.size() == b.size() && p.size() == a.size() &&
         hamming_distance(a, b, p) == 0;
}

}  // namespace gi
