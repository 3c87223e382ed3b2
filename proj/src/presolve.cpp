// SPDX-License-Identifier: Apache-2.0
#include "gi/presolve.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace gi {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

/// Fixed-width bitset over vertex ids; all loops ascend for determinism.
struct VertexSet {
  std::vector<std::uint64_t> w;

  explicit VertexSet(int n) : w((n + 63) / 64, 0) {}

  void set(int i) { w[i >> 6] |= 1ULL << (i & 63); }
  bool empty() const {
    for (std::uint64_t b : w)
      if (b) return false;
    return true;
  }
  void intersect(const VertexSet& o) {
    for (std::size_t k = 0; k < w.size(); ++k) w[k] &= o.w[k];
  }
  void clear(int i) { w[i >> 6] &= ~(1ULL << (i & 63)); }
  /// Drops every element <= i.
  void clear_through(int i) {
    const int blk = i >> 6;
    for (int k = 0; k < blk; ++k) w[k] = 0;
    const int rem = (i & 63) + 1;
    if (rem == 64) {
      w[blk] = 0;
    } else {
      w[blk] &= ~((1ULL << rem) - 1);
    }
  }
  template <class F>
  void for_each(F f) const {
    for (std::size_t k = 0; k < w.size(); ++k) {
      std::uint64_t b = w[k];
      while (b) {
        f(static_cast<int>(k * 64) + __builtin_ctzll(b));
        b &= b - 1;
      }
    }
  }
};

std::vector<VertexSet> adjacency_sets(const Graph& g) {
  const int n = g.size();
  std::vector<VertexSet> nbr(n, VertexSet(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (g.has_edge(i, j)) nbr[i].set(j);
    }
  }
  return nbr;
}

/// Ordered clique extension: every clique {v0 < v1 < ...} of size 3..k is
/// visited exactly once and credited to each member.
void extend_cliques(const std::vector<VertexSet>& nbr, int k,
                    std::vector<int>& members, const VertexSet& cand,
                    std::vector<std::vector<long long>>& counts) {
  cand.for_each([&](int u) {
    members.push_back(u);
    const int size = static_cast<int>(members.size());
    if (size >= 3) {
      for (int w : members) ++counts[w][size - 3];
    }
    if (size < k) {
      VertexSet next = cand;
      next.intersect(nbr[u]);
      next.clear_through(u);
      extend_cliques(nbr, k, members, next, counts);
    }
    members.pop_back();
  });
}

/// Pivoted Bron-Kerbosch over <= 32 vertices (word-mask graph): counts
/// maximal cliques by size.
void bk_count(const std::vector<std::uint32_t>& adj, std::uint32_t p,
              std::uint32_t x, int depth, std::vector<long long>& by_size) {
  if (p == 0 && x == 0) {
    if (depth >= 1) {
      if (static_cast<int>(by_size.size()) < depth) by_size.resize(depth, 0);
      ++by_size[depth - 1];
    }
    return;
  }
  // Pivot: vertex of P|X with most neighbors in P (lowest index on ties).
  std::uint32_t both = p | x;
  int pivot = -1, best = -1;
  for (std::uint32_t m = both; m;) {
    const int u = __builtin_ctz(m);
    m &= m - 1;
    const int cnt = __builtin_popcount(p & adj[u]);
    if (cnt > best) {
      best = cnt;
      pivot = u;
    }
  }
  std::uint32_t ext = p & ~adj[pivot];
  while (ext) {
    const int v = __builtin_ctz(ext);
    ext &= ext - 1;
    bk_count(adj, p & adj[v], x & adj[v], depth + 1, by_size);
    p &= ~(1U << v);
    x |= 1U << v;
  }
}

/// Counts maximal independent sets of size <= cap in the graph on
/// `universe` given by VertexSet adjacency (maximality within the universe).
/// free = vertices not adjacent to and not in the current set; a set is
/// maximal iff free is empty.
void bounded_mis(const std::vector<VertexSet>& non_adj, int cap, int size,
                 const VertexSet& free, int start,
                 std::vector<long long>& by_size) {
  if (size >= 1 && free.empty()) {
    if (static_cast<int>(by_size.size()) < size) by_size.resize(size, 0);
    ++by_size[size - 1];
  }
  if (size == cap) return;
  free.for_each([&](int u) {
    if (u < start) return;
    VertexSet next = free;
    next.intersect(non_adj[u]);
    next.clear(u);
    bounded_mis(non_adj, cap, size + 1, next, u + 1, by_size);
  });
}

void trim_trailing_zeros(std::vector<long long>& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

long long profile_at(const std::vector<long long>& v, int s) {
  return s - 1 < static_cast<int>(v.size()) ? v[s - 1] : 0;
}

/// Entrywise compatibility of vertex i on the row side with vertex j on the
/// column side under the parts present on both sides.
bool compatible(const VertexInvariants& a, const VertexInvariants& b, int i, int j) {
  if (a.has_degree && b.has_degree && a.degree[i] != b.degree[j]) return false;
  if (a.clique_k > 0 && b.clique_k > 0 && a.cliques[i] != b.cliques[j]) return false;
  if (a.star_cap > 0 && b.star_cap > 0) {
    const bool truncated = a.star_truncated[i] || b.star_truncated[j];
    const int limit = truncated
                          ? a.star_cap
                          : std::max(static_cast<int>(a.stars[i].size()),
                                     static_cast<int>(b.stars[j].size()));
    for (int s = 1; s <= limit; ++s) {
      if (profile_at(a.stars[i], s) != profile_at(b.stars[j], s)) return false;
    }
  }
  return true;
}

}  // namespace

VertexInvariants degree_invariants(const Graph& g) {
  VertexInvariants inv;
  inv.n = g.size();
  inv.has_degree = true;
  inv.degree.resize(g.size());
  for (int v = 0; v < g.size(); ++v) inv.degree[v] = g.degree(v);
  return inv;
}

VertexInvariants clique_counts(const Graph& g, int k) {
  if (k < 2) throw std::invalid_argument("clique size bound must be at least 2");
  VertexInvariants inv;
  inv.n = g.size();
  inv.clique_k = k;
  inv.cliques.assign(g.size(), std::vector<long long>(std::max(0, k - 2), 0));
  if (k < 3) return inv;

  const std::vector<VertexSet> nbr = adjacency_sets(g);
  std::vector<int> members;
  members.reserve(k);
  for (int v = 0; v < g.size(); ++v) {
    members.push_back(v);
    VertexSet cand = nbr[v];
    cand.clear_through(v);
    extend_cliques(nbr, k, members, cand, inv.cliques);
    members.pop_back();
  }
  return inv;
}

VertexInvariants star_counts(const Graph& g, int size_cap, int degree_threshold) {
  if (size_cap < 1) throw std::invalid_argument("star size cap must be at least 1");
  const int n = g.size();
  VertexInvariants inv;
  inv.n = n;
  inv.star_cap = size_cap;
  inv.stars.assign(n, {});
  inv.star_truncated.assign(n, false);

  // The full-profile path runs on single-word masks; degrees past 31 always
  // use the bounded path regardless of the configured threshold.
  const int full_limit = std::min(degree_threshold, 31);
  for (int v = 0; v < n; ++v) {
    std::vector<int> hood;
    for (int u = 0; u < n; ++u) {
      if (g.has_edge(v, u)) hood.push_back(u);
    }
    const int d = static_cast<int>(hood.size());
    if (d == 0) continue;

    if (d <= full_limit) {
      // Full profile: maximal independent sets of G[N(v)] are the maximal
      // cliques of the complement, counted with pivoted Bron-Kerbosch.
      std::vector<std::uint32_t> comp(d, 0);
      for (int p = 0; p < d; ++p) {
        for (int q = 0; q < d; ++q) {
          if (p != q && !g.has_edge(hood[p], hood[q])) comp[p] |= 1U << q;
        }
      }
      bk_count(comp, d >= 32 ? ~0U : (1U << d) - 1, 0, 0, inv.stars[v]);
    } else {
      inv.star_truncated[v] = true;
      // Non-adjacency sets restricted to the neighborhood.
      std::vector<VertexSet> non_adj(n, VertexSet(n));
      VertexSet universe(n);
      for (int u : hood) universe.set(u);
      for (int u : hood) {
        VertexSet s = universe;
        s.clear(u);
        for (int t : hood) {
          if (g.has_edge(u, t)) s.clear(t);
        }
        non_adj[u] = std::move(s);
      }
      bounded_mis(non_adj, size_cap, 0, universe, 0, inv.stars[v]);
    }
    trim_trailing_zeros(inv.stars[v]);
  }
  return inv;
}

FixingMask compatibility_mask(const VertexInvariants& inv_a, const VertexInvariants& inv_b) {
  if (inv_a.n != inv_b.n) {
    throw std::invalid_argument("invariants are for graphs of different sizes");
  }
  if (inv_a.clique_k > 0 && inv_b.clique_k > 0 && inv_a.clique_k != inv_b.clique_k) {
    throw std::invalid_argument("clique profiles computed with different bounds");
  }
  if (inv_a.star_cap > 0 && inv_b.star_cap > 0 && inv_a.star_cap != inv_b.star_cap) {
    throw std::invalid_argument("star profiles computed with different caps");
  }
  // X(i, j) = 1 in a zero of ||XA - BX||^2 identifies vertex i of B with
  // vertex j of A, so rows compare against inv_b and columns against inv_a.
  FixingMask mask(inv_a.n);
  for (int i = 0; i < inv_a.n; ++i) {
    for (int j = 0; j < inv_a.n; ++j) {
      if (!compatible(inv_b, inv_a, i, j)) mask.fix_zero(i, j);
    }
  }
  return mask;
}

ObbtResult obbt_fix(const Graph& a, const Graph& b, const FixingMask& mask,
                    int i, int j, ObbtTarget target, int budget,
                    const FwConfig& inner, double tol, const Matrix* start) {
  if (!mask.is_free(i, j)) {
    throw std::logic_error("bound tightening requires a Free entry");
  }
  QuadraticObjective obj = QuadraticObjective::for_graphs(a, b);
  if (target == ObbtTarget::One) {
    obj.add_linear(i, j, 1.0);  // min f + X_ij; bound > tol forces X_ij = 1
  } else {
    obj.add_linear(i, j, -1.0);  // min f + (1 - X_ij); bound > tol forces 0
    obj.add_constant(1.0);
  }
  FwConfig cfg = inner;
  cfg.max_iters = budget;
  cfg.stop_dual_above = tol;
  cfg.stop_on_zero_vertex = false;
  cfg.record_primal = nullptr;

  const FwState st = solve_fw(obj, mask, cfg, start);

  ObbtResult res{ObbtVerdict::Inconclusive, mask, st.iters};
  if (st.dual_bound > tol) {
    FixingMask fixed = mask.with_fix(
        i, j, target == ObbtTarget::One ? EntryState::One : EntryState::Zero);
    if (!mask_feasible(fixed)) {
      res.verdict = ObbtVerdict::Infeasible;
    } else {
      res.verdict = ObbtVerdict::Fixed;
      res.mask = std::move(fixed);
    }
  }
  return res;
}

PresolveOutcome run_presolve(const Graph& a, const Graph& b, const PresolveConfig& cfg) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("presolve requires graphs of equal size");
  }
  const int n = a.size();
  PresolveOutcome out{FixingMask(n), {}};
  FixingMask& mask = out.mask;
  PresolveStats& stats = out.stats;

  const auto finish = [&]() {
    stats.fixings_fraction =
        static_cast<double>(mask.fixed_count()) / (static_cast<double>(n) * n);
    if (stats.obbt_trials > 0) {
      stats.obbt_iters_avg =
          static_cast<double>(stats.obbt_fw_iters) / static_cast<double>(stats.obbt_trials);
    }
  };

  // Zeros from one stage feed the next; a conflict with an existing One or a
  // lost perfect matching certifies non-isomorphism.
  const auto apply_stage = [&](const std::string& name,
                               const VertexInvariants& ia,
                               const VertexInvariants& ib) {
    const Clock::time_point t0 = Clock::now();
    bool conflict = false;
    for (int i = 0; i < n && !conflict; ++i) {
      for (int j = 0; j < n; ++j) {
        if (compatible(ib, ia, i, j)) continue;
        if (mask.at(i, j) == EntryState::One) {
          conflict = true;
          break;
        }
        mask.fix_zero(i, j);
      }
    }
    const bool ok = !conflict && mask_feasible(mask);
    stats.stage_times_ms.emplace_back(name, ms_since(t0));
    if (!ok) {
      stats.infeasible = true;
      stats.infeasible_stage = name;
    }
    return ok;
  };

  if (cfg.degree) {
    if (!apply_stage("degree", degree_invariants(a), degree_invariants(b))) {
      finish();
      return out;
    }
  }
  if (cfg.clique) {
    if (!apply_stage("clique", clique_counts(a, cfg.clique_k),
                     clique_counts(b, cfg.clique_k))) {
      finish();
      return out;
    }
  }
  if (cfg.star) {
    if (!apply_stage("star", star_counts(a, cfg.star_cap, cfg.degree_threshold),
                     star_counts(b, cfg.star_cap, cfg.degree_threshold))) {
      finish();
      return out;
    }
  }

  if (cfg.obbt) {
    const Clock::time_point t0 = Clock::now();
    // Cheapest-to-decide entries first: similar degrees make the augmented
    // relaxation tight quickly.
    std::vector<std::tuple<int, int, int>> order;
    order.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (mask.is_free(i, j)) {
          order.emplace_back(std::abs(b.degree(i) - a.degree(j)), i, j);
        }
      }
    }
    std::stable_sort(order.begin(), order.end());

    Matrix warm = barycenter(mask);
    bool warm_valid = true;
    for (const auto& [d, i, j] : order) {
      if (ms_since(t0) > cfg.obbt_time_budget_ms) break;
      if (!mask.is_free(i, j)) continue;  // fixed meanwhile by normalization
      if (!warm_valid) {
        warm = barycenter(mask);
        warm_valid = true;
      }
      const ObbtResult res =
          obbt_fix(a, b, mask, i, j, cfg.obbt_target, cfg.obbt_budget,
                   cfg.obbt_fw, cfg.obbt_tol, &warm);
      ++stats.obbt_trials;
      stats.obbt_fw_iters += res.fw_iters;
      if (res.verdict == ObbtVerdict::Infeasible) {
        stats.infeasible = true;
        stats.infeasible_stage = "obbt";
        break;
      }
      if (res.verdict == ObbtVerdict::Fixed) {
        ++stats.obbt_fixed;
        mask = res.mask;
        warm_valid = false;
      }
    }
    stats.stage_times_ms.emplace_back("obbt", ms_since(t0));
  }

  finish();
  return out;
}

}  // namespace gi
