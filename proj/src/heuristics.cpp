// SPDX-License-Identifier: Apache-2.0
#include "gi/heuristics.hpp"

#include <cmath>

namespace gi {

DcResult solve_dc(const Graph& a, const Graph& b, const DcConfig& cfg) {
  DcResult res;
  if (a.size() != b.size()) return res;
  const int n = a.size();
  const FixingMask free_mask(n);
  const QuadraticObjective base = QuadraticObjective::for_graphs(a, b);

  const auto merit_of = [&](const Matrix& x) {
    return base.value(x) - cfg.lambda * x.squaredNorm();
  };
  // Row->column images p of a vertex are accepted iff B(i,j) == A(p(i), p(j)).
  const auto verified = [&](const Permutation& p) {
    return is_isomorphism(b, a, p);
  };

  Matrix x = cfg.start && cfg.start->rows() == n && cfg.start->cols() == n
                 ? *cfg.start
                 : barycenter(free_mask);
  res.merit.push_back(merit_of(x));

  FwConfig inner = cfg.inner_fw;
  inner.stop_on_zero_vertex = true;
  inner.record_primal = nullptr;

  LmoWorkspace ws;
  for (int t = 0; t < cfg.outer_iters; ++t) {
    // DCA step: linearize the concave part at x, i.e. minimize a convex
    // model f(X) - 2 lambda <x, X> warm-started from x.
    QuadraticObjective model = QuadraticObjective::for_graphs(a, b);
    model.set_linear(-2.0 * cfg.lambda * x);

    const FwState st = solve_fw(model, free_mask, inner, &x);
    res.fw_iters += st.iters;
    res.outer_used = t + 1;

    if (st.best_vertex_value == 0.0 && st.best_vertex && verified(*st.best_vertex)) {
      res.status = SolveStatus::Isomorphic;
      res.permutation = *st.best_vertex;
      return res;
    }

    x = st.X;
    res.merit.push_back(merit_of(x));

    // Nearest-permutation rounding: argmax <X, P> over all permutations.
    const Permutation rounded = lmo(-x, free_mask, ws);
    if (verified(rounded)) {
      res.status = SolveStatus::Isomorphic;
      res.permutation = rounded;
      return res;
    }

    const std::size_t m = res.merit.size();
    if (m >= 2 && res.merit[m - 2] - res.merit[m - 1] <= cfg.stall_tol) break;
  }
  return res;
}

}  // namespace gi
