// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "gi/bnb.hpp"

namespace gi {

struct DcConfig {
  /// Weight of the concave -lambda ||X||_F^2 push toward vertices.
  double lambda = 1e-2;
  int outer_iters = 50;
  /// Initial iterate; defaults to the barycenter of the polytope.
  std::optional<Matrix> start;
  /// Inner FW subproblem settings (warm-started from the previous iterate,
  /// which keeps the merit function monotone).
  FwConfig inner_fw = [] {
    FwConfig c;
    c.gap_tol = 1e-6;
    return c;
  }();
  /// Stop outer iterations once the merit improves by less than this.
  double stall_tol = 1e-12;
};

struct DcResult {
  /// Isomorphic (with an exactly verified permutation) or Inconclusive;
  /// the heuristic never claims non-isomorphism.
  SolveStatus status = SolveStatus::Inconclusive;
  std::optional<Permutation> permutation;
  /// merit[t] = f(X_t) - lambda ||X_t||_F^2, including the start point;
  /// nonincreasing by construction.
  std::vector<double> merit;
  long long fw_iters = 0;
  int outer_used = 0;
};

/// Difference-of-convex heuristic: DCA on f(X) - lambda ||X||_F^2 over the
/// whole Birkhoff polytope. Each outer step minimizes the convex model
/// f(X) - 2 lambda <X_t, X> with FW, rounds the iterate to the nearest
/// permutation (an LMO call on -X) and returns Isomorphic only when a
/// rounded or incumbent vertex verifies exactly.
DcResult solve_dc(const Graph& a, const Graph& b, const DcConfig& cfg = {});

}  // namespace gi
