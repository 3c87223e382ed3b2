// SPDX-License-Identifier: Apache-2.0
#include "gi/birkhoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSinkhornTol = 1e-10;
constexpr int kSinkhornMaxIters = 20000;

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Kuhn's augmenting-path step on the non-Zero pattern.
bool augment(const FixingMask& mask, int row, std::vector<char>& visited,
             std::vector<int>& match_row_of_col) {
  const int n = mask.size();
  for (int j = 0; j < n; ++j) {
    if (visited[j] || mask.at(row, j) == EntryState::Zero) continue;
    visited[j] = 1;
    if (match_row_of_col[j] < 0 ||
        augment(mask, match_row_of_col[j], visited, match_row_of_col)) {
      match_row_of_col[j] = row;
      return true;
    }
  }
  return false;
}

/// Perfect matching on the non-Zero pattern; match_col_of_row[i] = column,
/// or an empty vector when none exists.
std::vector<int> perfect_matching(const FixingMask& mask) {
  const int n = mask.size();
  std::vector<int> match_row_of_col(n, -1);
  std::vector<char> matched_row(n, 0);
  // Greedy seed, then augment the leftover rows.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (match_row_of_col[j] < 0 && mask.at(i, j) != EntryState::Zero) {
        match_row_of_col[j] = i;
        matched_row[i] = 1;
        break;
      }
    }
  }
  std::vector<char> visited(n, 0);
  for (int i = 0; i < n; ++i) {
    if (matched_row[i]) continue;
    std::fill(visited.begin(), visited.end(), 0);
    if (!augment(mask, i, visited, match_row_of_col)) return {};
  }
  std::vector<int> match_col_of_row(n, -1);
  for (int j = 0; j < n; ++j) match_col_of_row[match_row_of_col[j]] = j;
  return match_col_of_row;
}

/// Strongly connected components (Kosaraju, iterative) of a digraph given as
/// adjacency lists; returns component ids.
std::vector<int> scc_ids(const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<std::vector<int>> radj(n);
  for (int u = 0; u < n; ++u) {
    for (int w : adj[u]) radj[w].push_back(u);
  }
  std::vector<int> order;
  order.reserve(n);
  std::vector<char> seen(n, 0);
  std::vector<std::pair<int, std::size_t>> stack;
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    seen[s] = 1;
    stack.emplace_back(s, 0);
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      if (next < adj[u].size()) {
        const int w = adj[u][next++];
        if (!seen[w]) {
          seen[w] = 1;
          stack.emplace_back(w, 0);
        }
      } else {
        order.push_back(u);
        stack.pop_back();
      }
    }
  }
  std::vector<int> comp(n, -1);
  int id = 0;
  std::vector<int> dfs;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (comp[*it] >= 0) continue;
    dfs.push_back(*it);
    comp[*it] = id;
    while (!dfs.empty()) {
      const int u = dfs.back();
      dfs.pop_back();
      for (int w : radj[u]) {
        if (comp[w] < 0) {
          comp[w] = id;
          dfs.push_back(w);
        }
      }
    }
    ++id;
  }
  return comp;
}

}  // namespace

FixingMask::FixingMask(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("mask must have at least one row");
  state_.assign(static_cast<std::size_t>(n) * n, EntryState::Free);
  row_one_.assign(n, -1);
  col_one_.assign(n, -1);
}

void FixingMask::set_zero(int i, int j) {
  EntryState& s = state_[index(i, j)];
  if (s == EntryState::Free) {
    s = EntryState::Zero;
    ++fixed_;
  }
}

FixingMask FixingMask::with_fix(int i, int j, EntryState value) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_) {
    throw std::logic_error("fix position out of range");
  }
  if (value == EntryState::Free) {
    throw std::logic_error("cannot fix an entry back to Free");
  }
  if (at(i, j) != EntryState::Free) {
    throw std::logic_error("entry is already fixed");
  }
  FixingMask out = *this;
  if (value == EntryState::Zero) {
    out.set_zero(i, j);
    return out;
  }
  if (row_one_[i] >= 0 || col_one_[j] >= 0) {
    throw std::logic_error("conflicting One in the same row or column");
  }
  out.state_[index(i, j)] = EntryState::One;
  ++out.fixed_;
  ++out.ones_;
  out.row_one_[i] = j;
  out.col_one_[j] = i;
  for (int k = 0; k < n_; ++k) {
    if (k != j) out.set_zero(i, k);
    if (k != i) out.set_zero(k, j);
  }
  return out;
}

void FixingMask::fix_zero(int i, int j) {
  if (i < 0 || i >= n_ || j < 0 || j >= n_) {
    throw std::logic_error("fix position out of range");
  }
  if (at(i, j) == EntryState::One) {
    throw std::logic_error("cannot fix a One entry to Zero");
  }
  set_zero(i, j);
}

FixingMask FixingMask::restricted_to_support(const Matrix& x, double tol) const {
  if (x.rows() != n_ || x.cols() != n_) {
    throw std::invalid_argument("iterate size must match the mask");
  }
  FixingMask out = *this;
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      if (out.state_[index(i, j)] == EntryState::Free && x(i, j) <= tol) {
        out.set_zero(i, j);
      }
    }
  }
  return out;
}

bool mask_feasible(const FixingMask& mask) {
  if (mask.fixed_count() == 0) return true;
  return !perfect_matching(mask).empty();
}

BoolMatrix support_core(const FixingMask& mask) {
  const int n = mask.size();
  const std::vector<int> match = perfect_matching(mask);
  if (match.empty()) throw InfeasibleMaskError();

  // Column digraph: an arc match(i) -> j for every allowed entry (i, j).
  // The entry (i, j) lies on some perfect matching iff j == match(i) or the
  // arc closes a directed cycle, i.e. both endpoints share an SCC.
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j != match[i] && mask.at(i, j) != EntryState::Zero) {
        adj[match[i]].push_back(j);
      }
    }
  }
  const std::vector<int> comp = scc_ids(adj);

  BoolMatrix core(n, n);
  core.setConstant(false);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      core(i, j) = mask.at(i, j) != EntryState::Zero &&
                   (j == match[i] || comp[match[i]] == comp[j]);
    }
  }
  return core;
}

Permutation lmo(const Matrix& cost, const FixingMask& mask, LmoWorkspace& ws) {
  const int n = mask.size();
  if (cost.rows() != n || cost.cols() != n) {
    throw std::invalid_argument("cost matrix size must match the mask");
  }

  // Delete One rows/columns; the Hungarian runs on the Free block only.
  ws.free_rows.clear();
  ws.free_cols.clear();
  for (int i = 0; i < n; ++i) {
    if (mask.one_in_row(i) < 0) ws.free_rows.push_back(i);
  }
  for (int j = 0; j < n; ++j) {
    if (mask.one_in_col(j) < 0) ws.free_cols.push_back(j);
  }
  const int r = static_cast<int>(ws.free_rows.size());

  std::vector<int> images(n, -1);
  for (int i = 0; i < n; ++i) {
    if (mask.one_in_row(i) >= 0) images[i] = mask.one_in_row(i);
  }

  if (r > 0) {
    // Hungarian with potentials, 1-based with column 0 as the virtual root.
    ws.u.assign(r + 1, 0.0);
    ws.v.assign(r + 1, 0.0);
    ws.p.assign(r + 1, 0);
    ws.way.assign(r + 1, 0);
    for (int a = 1; a <= r; ++a) {
      ws.p[0] = a;
      int j0 = 0;
      ws.minv.assign(r + 1, kInf);
      ws.used.assign(r + 1, 0);
      do {
        ws.used[j0] = 1;
        const int i0 = ws.p[j0];
        const int row = ws.free_rows[i0 - 1];
        double delta = kInf;
        int j1 = -1;
        for (int j = 1; j <= r; ++j) {
          if (ws.used[j]) continue;
          const int col = ws.free_cols[j - 1];
          const double entry = mask.at(row, col) == EntryState::Zero
                                   ? kInf
                                   : cost(row, col);
          const double cur = entry - ws.u[i0] - ws.v[j];
          if (cur < ws.minv[j]) {
            ws.minv[j] = cur;
            ws.way[j] = j0;
          }
          if (ws.minv[j] < delta) {
            delta = ws.minv[j];
            j1 = j;
          }
        }
        if (!(delta < kInf)) throw InfeasibleMaskError();
        for (int j = 0; j <= r; ++j) {
          if (ws.used[j]) {
            ws.u[ws.p[j]] += delta;
            ws.v[j] -= delta;
          } else {
            ws.minv[j] -= delta;
          }
        }
        j0 = j1;
      } while (ws.p[j0] != 0);
      do {
        const int j1 = ws.way[j0];
        ws.p[j0] = ws.p[j1];
        j0 = j1;
      } while (j0 != 0);
    }
    for (int j = 1; j <= r; ++j) {
      images[ws.free_rows[ws.p[j] - 1]] = ws.free_cols[j - 1];
    }
  }
  return Permutation(std::move(images));
}

Permutation lmo(const Matrix& cost, const FixingMask& mask) {
  LmoWorkspace ws;
  return lmo(cost, mask, ws);
}

Permutation lmo(const Matrix& cost) {
  return lmo(cost, FixingMask(static_cast<int>(cost.rows())));
}

namespace {

/// Sinkhorn scaling of a nonnegative matrix whose pattern has total support;
/// alternates row/column normalization until both sums are within tolerance.
Matrix sinkhorn(Matrix w) {
  const auto converged = [&w]() {
    const double row_err = (w.rowwise().sum().array() - 1.0).abs().maxCoeff();
    const double col_err = (w.colwise().sum().array() - 1.0).abs().maxCoeff();
    return row_err < kSinkhornTol && col_err < kSinkhornTol;
  };
  for (int it = 0; it < kSinkhornMaxIters; ++it) {
    // Evaluate the sums before scaling: lazy expressions would re-read the
    // partially updated matrix.
    const Eigen::ArrayXd row_sums = w.rowwise().sum();
    w.array().colwise() /= row_sums;
    const Eigen::Array<double, 1, Eigen::Dynamic> col_sums = w.colwise().sum();
    w.array().rowwise() /= col_sums;
    if (it % 8 == 7 && converged()) break;
  }
  return w;
}

}  // namespace

Matrix barycenter(const FixingMask& mask) {
  const BoolMatrix core = support_core(mask);
  return sinkhorn(core.cast<double>());
}

Matrix project_to_face(const Matrix& x, const FixingMask& mask) {
  const int n = mask.size();
  if (x.rows() != n || x.cols() != n) {
    throw std::invalid_argument("iterate size must match the mask");
  }
  const BoolMatrix core = support_core(mask);
  const double floor = 0.05 / n;
  Matrix w = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (core(i, j)) w(i, j) = std::max(x(i, j), 0.0) + floor;
    }
  }
  return sinkhorn(std::move(w));
}

}  // namespace gi
