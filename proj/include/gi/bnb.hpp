// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "gi/presolve.hpp"

namespace gi {

enum class NodeStrategy { BestBound, DfsBranchUp, DfsBranchDown };
enum class FwVariant { Fw, Bpcg, Dicg };

struct BnbNode {
  FixingMask mask;
  /// Valid lower bound on the best integer value of the subtree; monotone
  /// along any root-leaf path.
  double lb = 0.0;
  int depth = 0;
  long long id = 0;
  long long parent = -1;
  /// Parent iterate for a warm start (reprojected onto this face); may be
  /// null, in which case the node starts from the face barycenter.
  std::shared_ptr<const Matrix> warm;
};

struct NoFractionalEntry : std::runtime_error {
  NoFractionalEntry() : std::runtime_error("relaxation iterate is integral") {}
};

/// Branching entry: the most fractional Free entry of x (distance to the
/// nearest integer), ties broken by larger |grad|, then lexicographically.
/// Throws NoFractionalEntry when every Free entry is within int_tol of 0/1.
std::pair<int, int> select_branch_entry(const Matrix& x, const Matrix& grad,
                                        const FixingMask& mask, double int_tol);

/// Children (One-child, Zero-child) on the selected entry; both inherit the
/// node's bound and get consecutive ids starting at first_child_id.
std::pair<BnbNode, BnbNode> branch(const BnbNode& node, const Matrix& x,
                                   const Matrix& grad, double int_tol,
                                   long long first_child_id);

/// Deterministic open-node store. BestBound pops the minimum-lb node
/// (ties: deepest, then lowest id). DfsBranchUp/Down pop the registered dive
/// child while it is open and fall back to the BestBound rule to restart.
class Frontier {
 public:
  void push(BnbNode node);
  BnbNode pop(NodeStrategy strategy);
  bool empty() const { return open_.empty(); }
  std::size_t size() const { return open_.size(); }
  /// Min lb among open nodes; +inf when empty.
  double global_lower_bound() const;
  void set_dive_child(long long id) { dive_child_ = id; }

 private:
  std::vector<BnbNode> open_;
  long long dive_child_ = -1;
};

struct Certificate {
  enum class Kind {
    SizeMismatch,
    EdgeCountMismatch,
    PresolveInfeasible,
    PositiveLowerBound
  };
  Kind kind = Kind::PositiveLowerBound;
  /// PositiveLowerBound: minimum lower bound among pruned leaves (+inf when
  /// every leaf died of mask infeasibility).
  double lower_bound = 0.0;
  /// PresolveInfeasible: stage that proved emptiness.
  std::string stage;
};

enum class SolveStatus { Isomorphic, NonIsomorphic, Inconclusive };

struct SolveStats {
  long long nodes = 0;
  long long fw_iters = 0;
  double wall_ms = 0.0;
  PresolveStats presolve;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Inconclusive;
  /// Isomorphic: verified witness p with B(i, j) == A(p(i), p(j)) for all
  /// i, j (p maps each vertex of b to its mate in a).
  std::optional<Permutation> permutation;
  std::optional<Certificate> certificate;  // NonIsomorphic
  std::string reason;                      // Inconclusive: time_limit|node_limit
  SolveStats stats;
};

struct BnbConfig {
  NodeStrategy strategy = NodeStrategy::DfsBranchUp;
  FwVariant fw = FwVariant::Dicg;
  FwConfig node_fw;
  /// Prune a node once its lower bound exceeds this.
  double prune_tol = 1e-6;
  double int_tol = 1e-6;
  long long node_limit = -1;  // < 0: unlimited
  double time_limit_ms = -1;  // < 0: unlimited
  PresolveConfig presolve;
  /// One line per processed node: id,parent,depth,lb,gap,action with
  /// action in {branched, pruned, incumbent, infeasible}.
  std::ostream* trace = nullptr;
  /// Max live warm-start matrices before children fall back to cold starts.
  int warm_cache_cap = 1024;
};

/// Decides isomorphism of a and b: relaxation lower bounds over faces of the
/// Birkhoff polytope drive pruning, integral/vertex incumbents are verified
/// exactly before Isomorphic is reported, and an exhausted tree yields a
/// NonIsomorphic certificate. Deterministic for a fixed config when no
/// limit is hit.
SolveResult solve(const Graph& a, const Graph& b, const BnbConfig& cfg = {});

}  // namespace gi
