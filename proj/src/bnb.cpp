// SPDX-License-Identifier: Apache-2.0
#include "gi/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace gi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
using Clock = std::chrono::steady_clock;

void trace_line(std::ostream* out, long long id, long long parent, int depth,
                double lb, double gap, const char* action) {
  if (!out) return;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%lld,%lld,%d,%.17g,%.17g,%s\n", id, parent,
                depth, lb, gap, action);
  *out << buf;
}

/// Row-argmax permutation of a (near-)integral doubly stochastic matrix;
/// empty when the argmaxes collide.
std::optional<Permutation> rounded_permutation(const Matrix& x) {
  const int n = static_cast<int>(x.rows());
  std::vector<int> images(n, 0);
  std::vector<char> used(n, 0);
  for (int i = 0; i < n; ++i) {
    int arg = 0;
    for (int j = 1; j < n; ++j) {
      if (x(i, j) > x(i, arg)) arg = j;
    }
    if (used[arg]) return std::nullopt;
    used[arg] = 1;
    images[i] = arg;
  }
  return Permutation(std::move(images));
}

FwState run_node_solver(FwVariant variant, const QuadraticObjective& obj,
                        const FixingMask& mask, const FwConfig& cfg,
                        const Matrix* start) {
  switch (variant) {
    case FwVariant::Fw:
      return solve_fw(obj, mask, cfg, start);
    case FwVariant::Bpcg:
      return solve_bpcg(obj, mask, cfg, start);
    case FwVariant::Dicg:
      return solve_dicg(obj, mask, cfg, start);
  }
  throw std::logic_error("unknown FW variant");
}

}  // namespace

std::pair<int, int> select_branch_entry(const Matrix& x, const Matrix& grad,
                                        const FixingMask& mask, double int_tol) {
  const int n = mask.size();
  int bi = -1, bj = -1;
  double best_frac = int_tol, best_grad = -kInf;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!mask.is_free(i, j)) continue;
      const double frac = std::min(x(i, j), 1.0 - x(i, j));
      if (frac <= int_tol) continue;
      const double g = std::abs(grad(i, j));
      if (frac > best_frac || (frac == best_frac && g > best_grad)) {
        best_frac = frac;
        best_grad = g;
        bi = i;
        bj = j;
      }
    }
  }
  if (bi < 0) throw NoFractionalEntry();
  return {bi, bj};
}

std::pair<BnbNode, BnbNode> branch(const BnbNode& node, const Matrix& x,
                                   const Matrix& grad, double int_tol,
                                   long long first_child_id) {
  const auto [i, j] = select_branch_entry(x, grad, node.mask, int_tol);
  BnbNode one{node.mask.with_fix(i, j, EntryState::One), node.lb,
              node.depth + 1, first_child_id, node.id, node.warm};
  BnbNode zero{node.mask.with_fix(i, j, EntryState::Zero), node.lb,
               node.depth + 1, first_child_id + 1, node.id, node.warm};
  return {std::move(one), std::move(zero)};
}

void Frontier::push(BnbNode node) { open_.push_back(std::move(node)); }

double Frontier::global_lower_bound() const {
  double lb = kInf;
  for (const BnbNode& n : open_) lb = std::min(lb, n.lb);
  return lb;
}

BnbNode Frontier::pop(NodeStrategy strategy) {
  if (open_.empty()) throw std::logic_error("pop from an empty frontier");
  std::size_t pick = open_.size();

  if (strategy != NodeStrategy::BestBound && dive_child_ >= 0) {
    for (std::size_t k = 0; k < open_.size(); ++k) {
      if (open_[k].id == dive_child_) {
        pick = k;
        break;
      }
    }
  }
  if (pick == open_.size()) {
    // Best bound; ties prefer deeper nodes, then lower ids.
    pick = 0;
    for (std::size_t k = 1; k < open_.size(); ++k) {
      const BnbNode& c = open_[k];
      const BnbNode& b = open_[pick];
      if (c.lb < b.lb ||
          (c.lb == b.lb &&
           (c.depth > b.depth || (c.depth == b.depth && c.id < b.id)))) {
        pick = k;
      }
    }
  }
  BnbNode node = std::move(open_[pick]);
  open_.erase(open_.begin() + static_cast<std::ptrdiff_t>(pick));
  dive_child_ = -1;
  return node;
}

SolveResult solve(const Graph& a, const Graph& b, const BnbConfig& cfg) {
  const Clock::time_point t0 = Clock::now();
  std::optional<Clock::time_point> deadline;
  if (cfg.time_limit_ms >= 0) {
    deadline = t0 + std::chrono::duration_cast<Clock::duration>(
                        std::chrono::duration<double, std::milli>(cfg.time_limit_ms));
  }

  SolveResult res;
  const auto finish = [&](SolveResult&& r) {
    r.stats.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    return std::move(r);
  };

  if (a.size() != b.size()) {
    res.status = SolveStatus::NonIsomorphic;
    res.certificate = Certificate{Certificate::Kind::SizeMismatch, 0.0, ""};
    return finish(std::move(res));
  }
  if (a.directed_edge_count() != b.directed_edge_count()) {
    res.status = SolveStatus::NonIsomorphic;
    res.certificate = Certificate{Certificate::Kind::EdgeCountMismatch, 0.0, ""};
    return finish(std::move(res));
  }

  PresolveOutcome pre = run_presolve(a, b, cfg.presolve);
  res.stats.presolve = pre.stats;
  if (pre.stats.infeasible) {
    res.status = SolveStatus::NonIsomorphic;
    res.certificate = Certificate{Certificate::Kind::PresolveInfeasible, 0.0,
                                  pre.stats.infeasible_stage};
    return finish(std::move(res));
  }

  const QuadraticObjective obj = QuadraticObjective::for_graphs(a, b);
  Frontier frontier;
  frontier.push(BnbNode{std::move(pre.mask), 0.0, 0, 0, -1, nullptr});
  long long next_id = 1;
  double min_pruned = kInf;

  FwConfig node_cfg = cfg.node_fw;
  node_cfg.stop_dual_above = cfg.prune_tol;
  node_cfg.stop_on_zero_vertex = true;
  node_cfg.record_primal = nullptr;
  node_cfg.deadline = deadline;

  while (!frontier.empty()) {
    if (cfg.node_limit >= 0 && res.stats.nodes >= cfg.node_limit) {
      res.status = SolveStatus::Inconclusive;
      res.reason = "node_limit";
      return finish(std::move(res));
    }
    if (deadline && Clock::now() >= *deadline) {
      res.status = SolveStatus::Inconclusive;
      res.reason = "time_limit";
      return finish(std::move(res));
    }

    const BnbNode node = frontier.pop(cfg.strategy);
    ++res.stats.nodes;

    if (!mask_feasible(node.mask)) {
      trace_line(cfg.trace, node.id, node.parent, node.depth, node.lb, 0.0,
                 "infeasible");
      continue;
    }

    const Matrix start = node.warm ? project_to_face(*node.warm, node.mask)
                                   : barycenter(node.mask);
    const FwState st = run_node_solver(cfg.fw, obj, node.mask, node_cfg, &start);
    res.stats.fw_iters += st.iters;

    // A zero vertex with row->column images p satisfies B == P A P^T,
    // i.e. B(i, j) == A(p(i), p(j)) entrywise.
    if (st.best_vertex_value == 0.0 && st.best_vertex &&
        is_isomorphism(b, a, *st.best_vertex)) {
      trace_line(cfg.trace, node.id, node.parent, node.depth, node.lb, st.gap,
                 "incumbent");
      res.status = SolveStatus::Isomorphic;
      res.permutation = *st.best_vertex;
      return finish(std::move(res));
    }

    const double lb = std::max(node.lb, st.dual_bound);
    if (lb > cfg.prune_tol) {
      min_pruned = std::min(min_pruned, lb);
      trace_line(cfg.trace, node.id, node.parent, node.depth, lb, st.gap,
                 "pruned");
      continue;
    }
    if (st.stop == FwStop::Deadline) {
      // Interrupted mid-node: no trace line, the node was not processed.
      res.status = SolveStatus::Inconclusive;
      res.reason = "time_limit";
      return finish(std::move(res));
    }

    Matrix grad;
    obj.gradient(obj.residual(st.X), grad);

    int bi = -1, bj = -1;
    try {
      std::tie(bi, bj) = select_branch_entry(st.X, grad, node.mask, cfg.int_tol);
    } catch (const NoFractionalEntry&) {
      // Integral iterate: verify it as an incumbent first.
      if (const auto p = rounded_permutation(st.X); p && is_isomorphism(b, a, *p)) {
        trace_line(cfg.trace, node.id, node.parent, node.depth, lb, st.gap,
                   "incumbent");
        res.status = SolveStatus::Isomorphic;
        res.permutation = *p;
        return finish(std::move(res));
      }
      // Not an isomorphism; force progress on the largest Free entry, or
      // close the leaf when the face holds a single (non-zero) permutation.
      for (int i = 0; i < node.mask.size(); ++i) {
        for (int j = 0; j < node.mask.size(); ++j) {
          if (node.mask.is_free(i, j) &&
              (bi < 0 || st.X(i, j) > st.X(bi, bj))) {
            bi = i;
            bj = j;
          }
        }
      }
      if (bi < 0) {
        const double leaf_value = std::max(lb, st.primal);
        min_pruned = std::min(min_pruned, leaf_value);
        trace_line(cfg.trace, node.id, node.parent, node.depth, leaf_value,
                   st.gap, "pruned");
        continue;
      }
    }

    BnbNode parent = node;
    parent.lb = lb;
    if (static_cast<int>(frontier.size()) < cfg.warm_cache_cap) {
      parent.warm = std::make_shared<const Matrix>(st.X);
    } else {
      parent.warm = nullptr;
    }
    BnbNode one{parent.mask.with_fix(bi, bj, EntryState::One), lb,
                parent.depth + 1, next_id, parent.id, parent.warm};
    BnbNode zero{parent.mask.with_fix(bi, bj, EntryState::Zero), lb,
                 parent.depth + 1, next_id + 1, parent.id, parent.warm};
    next_id += 2;
    const long long one_id = one.id, zero_id = zero.id;
    frontier.push(std::move(zero));
    frontier.push(std::move(one));
    if (cfg.strategy == NodeStrategy::DfsBranchUp) {
      frontier.set_dive_child(one_id);
    } else if (cfg.strategy == NodeStrategy::DfsBranchDown) {
      frontier.set_dive_child(zero_id);
    }
    trace_line(cfg.trace, node.id, node.parent, node.depth, lb, st.gap,
               "branched");
  }

  res.status = SolveStatus::NonIsomorphic;
  res.certificate =
      Certificate{Certificate::Kind::PositiveLowerBound, min_pruned, ""};
  return finish(std::move(res));
}

}  // namespace gi
