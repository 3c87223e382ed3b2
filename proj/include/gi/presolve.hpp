// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gi/fw.hpp"

namespace gi {

/// Per-vertex combinatorial profiles compared entrywise by
/// compatibility_mask. Parts are optional: clique_k / star_cap are 0 when the
/// corresponding counts were not computed.
struct VertexInvariants {
  int n = 0;
  bool has_degree = false;
  int clique_k = 0;
  int star_cap = 0;
  std::vector<int> degree;
  /// cliques[v][s-3] = number of s-cliques containing v, s in 3..clique_k.
  std::vector<std::vector<long long>> cliques;
  /// stars[v][s-1] = number of maximal independent sets of size s in the
  /// subgraph induced by N(v); trailing zeros trimmed. In truncated mode
  /// only sizes <= star_cap are counted.
  std::vector<std::vector<long long>> stars;
  std::vector<bool> star_truncated;
};

VertexInvariants degree_invariants(const Graph& g);

/// Exact counts of all s-cliques through each vertex for s in 3..k, via
/// ordered clique extension bounded at size k. k >= 2.
VertexInvariants clique_counts(const Graph& g, int k);

/// Maximal-independent-set size profiles of each vertex neighborhood.
/// Vertices of degree <= degree_threshold get the full profile (pivoted
/// Bron-Kerbosch on the complement of the induced neighborhood); higher
/// degrees enumerate only maximal sets of size <= size_cap (cost grows like
/// deg^size_cap). Both modes agree on sizes <= size_cap, which keeps mixed
/// comparisons sound.
VertexInvariants star_counts(const Graph& g, int size_cap, int degree_threshold = 16);

/// Zero at (i, j) whenever some invariant present on both sides
/// distinguishes vertex i of B from vertex j of A. A zero of ||XA - BX||^2
/// with X(i, j) = 1 identifies those two vertices, which would have to share
/// degree, clique and star profiles, so every Zero is sound. Star profiles
/// are compared on all sizes when both vertices carry full profiles,
/// otherwise on sizes <= star_cap.
FixingMask compatibility_mask(const VertexInvariants& inv_a, const VertexInvariants& inv_b);

enum class ObbtTarget { Zero, One };
enum class ObbtVerdict { Fixed, Inconclusive, Infeasible };

struct ObbtResult {
  ObbtVerdict verdict = ObbtVerdict::Inconclusive;
  /// Fixed: the input mask with the entry fixed (feasibility verified);
  /// otherwise the input mask unchanged.
  FixingMask mask;
  /// Iterations spent by the trial solve.
  int fw_iters = 0;
};

/// Optimization-based bound tightening on entry (i, j), which must be Free.
/// Minimizes the augmented objective f + X_ij (target One) or f + (1 - X_ij)
/// (target Zero) over the face with a budget-capped FW run. A dual bound
/// above `tol` proves that every zero-objective permutation of the face has
/// X_ij = 1 (resp. 0), so the entry is fixed to the target; if that fix
/// makes the face empty the instance is infeasible (non-isomorphism proof).
ObbtResult obbt_fix(const Graph& a, const Graph& b, const FixingMask& mask,
                    int i, int j, ObbtTarget target, int budget,
                    const FwConfig& inner = {}, double tol = 1e-6,
                    const Matrix* start = nullptr);

struct PresolveConfig {
  bool degree = true;
  bool clique = true;
  bool star = true;
  bool obbt = false;
  int clique_k = 4;
  int star_cap = 4;
  int degree_threshold = 16;
  ObbtTarget obbt_target = ObbtTarget::Zero;
  /// FW iterations per OBBT trial.
  int obbt_budget = 100;
  double obbt_tol = 1e-6;
  /// Wall-clock cap for the whole OBBT sweep.
  double obbt_time_budget_ms = 60000;
  /// Template for OBBT trial solves (budget/threshold fields are overridden).
  FwConfig obbt_fw;
};

struct PresolveStats {
  /// Some stage proved the face empty: certified non-isomorphism.
  bool infeasible = false;
  std::string infeasible_stage;
  /// Fixed entries (Zeros implied by Ones included) / n^2.
  double fixings_fraction = 0.0;
  long long obbt_trials = 0;
  long long obbt_fixed = 0;
  long long obbt_fw_iters = 0;
  double obbt_iters_avg = 0.0;
  std::vector<std::pair<std::string, double>> stage_times_ms;
};

struct PresolveOutcome {
  FixingMask mask;
  PresolveStats stats;
};

/// Runs the configured stages in the fixed order degree, clique, star, obbt,
/// intersecting their fixings into one mask (monotone: stages only add
/// fixings). Stops early as soon as the mask becomes infeasible. OBBT visits
/// Free entries ordered by |deg_B(i) - deg_A(j)| ascending, ties
/// lexicographic.
PresolveOutcome run_presolve(const Graph& a, const Graph& b,
                             const PresolveConfig& cfg = {});

}  // namespace gi
