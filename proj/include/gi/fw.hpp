// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "gi/birkhoff.hpp"
#include "gi/graph.hpp"

namespace gi {

/// f(X) = ||X A - B X||_F^2 + <linear, X> + constant. A and B are held by
/// reference and must outlive the objective. The linear term is optional and
/// is what presolve bound tightening and the concave-penalty heuristic add
/// on top of the base alignment objective.
class QuadraticObjective {
 public:
  QuadraticObjective(const Matrix& a, const Matrix& b);
  static QuadraticObjective for_graphs(const Graph& a, const Graph& b);

  int size() const { return static_cast<int>(a_->rows()); }
  const Matrix& a() const { return *a_; }
  const Matrix& b() const { return *b_; }

  void add_linear(int i, int j, double coeff);
  void set_linear(Matrix c);
  void add_constant(double c) { constant_ += c; }
  bool has_linear() const { return linear_.size() > 0; }
  const Matrix& linear() const { return linear_; }
  double constant() const { return constant_; }

  /// R(X) = X A - B X.
  Matrix residual(const Matrix& x) const { return x * (*a_) - (*b_) * x; }

  double value(const Matrix& x) const;
  double value_with_residual(const Matrix& r, const Matrix& x) const;

  /// grad f(X) = 2 (R A^T - B^T R) + linear, written into g.
  void gradient(const Matrix& r, Matrix& g) const;

  /// A lower bound valid on the whole polytope without any computation:
  /// the base term is a squared norm and a nonnegative linear term cannot
  /// make it smaller. -inf when the linear part has negative coefficients.
  double trivial_lower_bound() const;

  /// Exact base value ||P A - B P||_F^2 of a permutation given by images;
  /// for 0/1 adjacency inputs this is the integer edge-mismatch count,
  /// computed exactly.
  double vertex_base_value(const std::vector<int>& images) const;

 private:
  const Matrix* a_;
  const Matrix* b_;
  Matrix linear_;
  double constant_ = 0.0;
};

struct FwConfig {
  int max_iters = 5000;
  double gap_tol = 1e-7;
  double zero_tol = 1e-8;
  /// Early stop once the running dual bound exceeds this threshold (used by
  /// branch-and-bound pruning and bound-tightening trials).
  double stop_dual_above = std::numeric_limits<double>::infinity();
  /// Stop as soon as an LMO vertex with zero base objective appears; the
  /// caller reads it from FwState::best_vertex.
  bool stop_on_zero_vertex = true;
  /// Debug fallback: open-loop 2/(t+2) steps instead of exact line search
  /// (solve_fw only).
  bool agnostic_steps = false;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  /// When set, f(X_t) is appended once per iteration (bound-trajectory
  /// diagnostics).
  std::vector<double>* record_primal = nullptr;
};

enum class FwStop { GapTol, ZeroPrimal, ZeroVertex, DualAbove, MaxIters, Deadline };

struct FwState {
  Matrix X;
  double primal = 0.0;
  /// Frank-Wolfe gap at X (clamped at 0).
  double gap = 0.0;
  /// Best lower bound seen: max over iterations of primal - gap, seeded
  /// with the objective's trivial bound. Never exceeds the true minimum.
  double dual_bound = -std::numeric_limits<double>::infinity();
  /// Completed movement steps (the final bookkeeping pass is not a step).
  int iters = 0;
  FwStop stop = FwStop::MaxIters;
  /// BPCG only: convex decomposition of X over active vertices.
  std::vector<std::pair<Permutation, double>> active_set;
  /// Best integer point among all LMO vertices encountered (base objective).
  std::optional<Permutation> best_vertex;
  double best_vertex_value = std::numeric_limits<double>::infinity();
};

/// Base objective and gradient on graphs (thin wrappers over
/// QuadraticObjective with no linear term).
double objective(const Matrix& x, const Graph& a, const Graph& b);
Matrix gradient(const Matrix& x, const Graph& a, const Graph& b);

/// Exact line-search step for the quadratic objective along `direction`
/// (descent means X - gamma * direction): gamma* = <grad f(X), direction> /
/// (2 ||direction A - B direction||_F^2), clamped to [0, gamma_max]; a zero
/// denominator yields gamma_max when the slope is positive, else 0.
double exact_step(const Matrix& x, const Matrix& direction, const Graph& a,
                  const Graph& b, double gamma_max = 1.0);

/// <grad, X - V> with V = lmo(grad, mask), clamped at 0.
double fw_gap(const Matrix& x, const Matrix& grad, const FixingMask& mask);

/// Standard Frank-Wolfe with exact line search, started at the face
/// barycenter (or `start`). Every LMO vertex doubles as an incumbent
/// candidate. Throws InfeasibleMaskError on an empty face.
FwState solve_fw(const QuadraticObjective& obj, const FixingMask& mask,
                 const FwConfig& cfg = {}, const Matrix* start = nullptr);
FwState solve_fw(const Graph& a, const Graph& b, const FixingMask& mask,
                 const FwConfig& cfg = {});

/// Blended pairwise conditional gradient: keeps an active vertex set, takes
/// a pairwise (away -> local FW) step when it dominates the global FW gap,
/// otherwise a global FW step. Starts from a single vertex.
FwState solve_bpcg(const QuadraticObjective& obj, const FixingMask& mask,
                   const FwConfig& cfg = {}, const Matrix* start = nullptr);
FwState solve_bpcg(const Graph& a, const Graph& b, const FixingMask& mask,
                   const FwConfig& cfg = {});

/// Decomposition-invariant pairwise steps: the away vertex is an LMO call on
/// the face restricted to the support of X, so no explicit decomposition is
/// stored; falls back to a plain FW step when that face is degenerate.
FwState solve_dicg(const QuadraticObjective& obj, const FixingMask& mask,
                   const FwConfig& cfg = {}, const Matrix* start = nullptr);
FwState solve_dicg(const Graph& a, const Graph& b, const FixingMask& mask,
                   const FwConfig& cfg = {});

/// Constants of the linear convergence rate over the Birkhoff polytope:
/// L = 2 (sqrt(m_a) + sqrt(m_b))^2, diameter D = sqrt(2 n), pyramidal-width
/// surrogate delta = 1/n, slope constant M = 1.
struct RateConstants {
  double lipschitz;
  double diameter;
  double delta;
  double slope;
  static RateConstants for_sizes(int n, int m_a, int m_b);
};

/// A priori bound on f(X_t) for exact-line-search FW on the alignment
/// objective. With equal directed edge counts m it specializes to
/// 8 m n (1 - 1/(16 n^3 m^2))^ceil((t-1)/2); otherwise the general
/// L D^2 / 2 (1 - delta^2 / (2 M^2 L D^2))^ceil((t-1)/2) form is used.
/// m_a, m_b are directed edge counts (2|E|).
double prop1_bound(int n, int m_a, int m_b, int t);

}  // namespace gi
