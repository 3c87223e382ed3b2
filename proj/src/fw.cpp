// SPDX-License-Identifier: Apache-2.0
#include "gi/fw.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDropWeight = 1e-14;
constexpr double kSupportTol = 1e-12;
constexpr int kResyncPeriod = 256;
constexpr int kDeadlinePeriod = 32;

double dot_entries(const Matrix& g, const Matrix& x) {
  return g.cwiseProduct(x).sum();
}

double dot_vertex(const Matrix& g, const std::vector<int>& img) {
  double s = 0.0;
  for (int i = 0; i < static_cast<int>(img.size()); ++i) s += g(i, img[i]);
  return s;
}

/// R_P = P A - B P for the permutation with the given images:
/// row i of P A is row img[i] of A; column img[j] of B P is column j of B.
void vertex_residual(const QuadraticObjective& obj, const std::vector<int>& img,
                     Matrix& out) {
  const Matrix& a = obj.a();
  const Matrix& b = obj.b();
  const int n = static_cast<int>(img.size());
  out.resize(n, n);
  for (int i = 0; i < n; ++i) out.row(i) = a.row(img[i]);
  for (int j = 0; j < n; ++j) out.col(img[j]) -= b.col(j);
}

double clamp_step(double num, double den, double gamma_max) {
  if (!(den > 0.0)) return num > 0.0 ? gamma_max : 0.0;
  return std::clamp(num / den, 0.0, gamma_max);
}

/// State and helpers shared by the three solver loops.
struct Engine {
  const QuadraticObjective& obj;
  const FixingMask& mask;
  const FwConfig& cfg;
  FwState st;
  LmoWorkspace ws;
  Matrix X, R, G, VR, VR2;
  int steps_since_sync = 0;

  Engine(const QuadraticObjective& o, const FixingMask& m, const FwConfig& c)
      : obj(o), mask(m), cfg(c) {
    st.dual_bound = obj.trivial_lower_bound();
  }

  void eval_vertex(const std::vector<int>& img) {
    const double val = obj.vertex_base_value(img);
    if (val < st.best_vertex_value) {
      st.best_vertex_value = val;
      st.best_vertex = Permutation(img);
    }
  }

  /// Computes primal/gradient/global FW vertex/gap/dual bound for the
  /// current iterate and applies the termination rules. Returns true when
  /// the solver must stop; v_img receives the global FW vertex.
  bool bookkeeping(int t, std::vector<int>& v_img, double& raw_gap) {
    st.primal = obj.value_with_residual(R, X);
    if (cfg.record_primal) cfg.record_primal->push_back(st.primal);
    obj.gradient(R, G);
    v_img = lmo(G, mask, ws).images();
    eval_vertex(v_img);
    raw_gap = dot_entries(G, X) - dot_vertex(G, v_img);
    st.gap = std::max(0.0, raw_gap);
    st.dual_bound = std::max(st.dual_bound, st.primal - st.gap);

    if (cfg.stop_on_zero_vertex && st.best_vertex_value == 0.0) {
      st.stop = FwStop::ZeroVertex;
      return true;
    }
    if (st.primal <= cfg.zero_tol) {
      st.stop = FwStop::ZeroPrimal;
      return true;
    }
    if (st.gap <= cfg.gap_tol) {
      st.stop = FwStop::GapTol;
      return true;
    }
    if (st.dual_bound > cfg.stop_dual_above) {
      st.stop = FwStop::DualAbove;
      return true;
    }
    if (cfg.deadline && t % kDeadlinePeriod == 0 &&
        std::chrono::steady_clock::now() >= *cfg.deadline) {
      st.stop = FwStop::Deadline;
      return true;
    }
    if (t >= cfg.max_iters) {
      st.stop = FwStop::MaxIters;
      return true;
    }
    return false;
  }

  /// Plain FW step toward the vertex v_img; raw_gap = <G, X - P_v>.
  void fw_step(int t, const std::vector<int>& v_img, double raw_gap) {
    vertex_residual(obj, v_img, VR);
    const double gamma =
        cfg.agnostic_steps
            ? 2.0 / (t + 2.0)
            : clamp_step(raw_gap, 2.0 * (R - VR).squaredNorm(), 1.0);
    if (gamma >= 1.0) {
      X.setZero();
      for (int i = 0; i < mask.size(); ++i) X(i, v_img[i]) = 1.0;
      R = VR;
    } else {
      X *= (1.0 - gamma);
      for (int i = 0; i < mask.size(); ++i) X(i, v_img[i]) += gamma;
      R = (1.0 - gamma) * R + gamma * VR;
    }
    resync();
  }

  void resync() {
    if (++steps_since_sync >= kResyncPeriod) {
      steps_since_sync = 0;
      R = obj.residual(X);
    }
  }

  FwState finish() && {
    st.X = std::move(X);
    return std::move(st);
  }
};

}  // namespace

QuadraticObjective::QuadraticObjective(const Matrix& a, const Matrix& b)
    : a_(&a), b_(&b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw std::invalid_argument("objective requires square matrices of equal size");
  }
}

QuadraticObjective QuadraticObjective::for_graphs(const Graph& a, const Graph& b) {
  return QuadraticObjective(a.adjacency(), b.adjacency());
}

void QuadraticObjective::add_linear(int i, int j, double coeff) {
  if (!has_linear()) linear_ = Matrix::Zero(size(), size());
  linear_(i, j) += coeff;
}

void QuadraticObjective::set_linear(Matrix c) {
  if (c.rows() != size() || c.cols() != size()) {
    throw std::invalid_argument("linear term size mismatch");
  }
  linear_ = std::move(c);
}

double QuadraticObjective::value(const Matrix& x) const {
  return value_with_residual(residual(x), x);
}

double QuadraticObjective::value_with_residual(const Matrix& r, const Matrix& x) const {
  double v = r.squaredNorm() + constant_;
  if (has_linear()) v += dot_entries(linear_, x);
  return v;
}

void QuadraticObjective::gradient(const Matrix& r, Matrix& g) const {
  g.noalias() = r * a_->transpose();
  g.noalias() -= b_->transpose() * r;
  g *= 2.0;
  if (has_linear()) g += linear_;
}

double QuadraticObjective::trivial_lower_bound() const {
  if (!has_linear() || linear_.minCoeff() >= 0.0) return constant_;
  return -kInf;
}

double QuadraticObjective::vertex_base_value(const std::vector<int>& images) const {
  const Matrix& a = *a_;
  const Matrix& b = *b_;
  const int n = static_cast<int>(images.size());
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double d = a(images[i], images[j]) - b(i, j);
      sum += d * d;
    }
  }
  return sum;
}

double objective(const Matrix& x, const Graph& a, const Graph& b) {
  return QuadraticObjective::for_graphs(a, b).value(x);
}

Matrix gradient(const Matrix& x, const Graph& a, const Graph& b) {
  const QuadraticObjective obj = QuadraticObjective::for_graphs(a, b);
  Matrix g;
  obj.gradient(obj.residual(x), g);
  return g;
}

double exact_step(const Matrix& x, const Matrix& direction, const Graph& a,
                  const Graph& b, double gamma_max) {
  const Matrix g = gradient(x, a, b);
  const double num = dot_entries(g, direction);
  const Matrix da = direction * a.adjacency() - b.adjacency() * direction;
  return clamp_step(num, 2.0 * da.squaredNorm(), gamma_max);
}

double fw_gap(const Matrix& x, const Matrix& grad, const FixingMask& mask) {
  const Permutation v = lmo(grad, mask);
  return std::max(0.0, dot_entries(grad, x) - dot_vertex(grad, v.images()));
}

FwState solve_fw(const QuadraticObjective& obj, const FixingMask& mask,
                 const FwConfig& cfg, const Matrix* start) {
  Engine e(obj, mask, cfg);
  e.X = start ? *start : barycenter(mask);
  e.R = obj.residual(e.X);
  std::vector<int> v_img;
  double raw_gap = 0.0;
  for (int t = 0;; ++t) {
    if (e.bookkeeping(t, v_img, raw_gap)) break;
    e.fw_step(t, v_img, raw_gap);
    e.st.iters = t + 1;
  }
  return std::move(e).finish();
}

FwState solve_bpcg(const QuadraticObjective& obj, const FixingMask& mask,
                   const FwConfig& cfg, const Matrix* start) {
  Engine e(obj, mask, cfg);

  struct ActiveVertex {
    std::vector<int> img;
    double weight;
  };
  std::vector<ActiveVertex> active;

  {
    // Start from the best vertex of the (warm or barycenter) reference point.
    const Matrix ref = start ? *start : barycenter(mask);
    const Matrix r0 = obj.residual(ref);
    obj.gradient(r0, e.G);
    const std::vector<int> v0 = lmo(e.G, mask, e.ws).images();
    e.eval_vertex(v0);
    e.X = Matrix::Zero(mask.size(), mask.size());
    for (int i = 0; i < mask.size(); ++i) e.X(i, v0[i]) = 1.0;
    vertex_residual(obj, v0, e.R);
    active.push_back({v0, 1.0});
  }

  std::vector<int> w_img;
  double raw_gap = 0.0;
  for (int t = 0;; ++t) {
    if (e.bookkeeping(t, w_img, raw_gap)) break;

    // Away vertex (max slope) and local FW vertex (min slope) in the
    // active set; ties keep the older vertex for determinism.
    std::size_t ia = 0, is = 0;
    double da = -kInf, ds = kInf;
    for (std::size_t k = 0; k < active.size(); ++k) {
      const double d = dot_vertex(e.G, active[k].img);
      if (d > da) {
        da = d;
        ia = k;
      }
      if (d < ds) {
        ds = d;
        is = k;
      }
    }

    if (da - ds >= raw_gap && ia != is) {
      // Pairwise step: shift weight from the away vertex onto the local one.
      vertex_residual(obj, active[ia].img, e.VR);
      vertex_residual(obj, active[is].img, e.VR2);
      e.VR -= e.VR2;  // (P_a - P_s) A - B (P_a - P_s)
      const double gamma_max = active[ia].weight;
      const double gamma =
          clamp_step(da - ds, 2.0 * e.VR.squaredNorm(), gamma_max);
      for (int i = 0; i < mask.size(); ++i) {
        const int ca = active[ia].img[i], cs = active[is].img[i];
        if (ca == cs) continue;
        e.X(i, ca) = std::max(0.0, e.X(i, ca) - gamma);
        e.X(i, cs) += gamma;
      }
      e.R -= gamma * e.VR;
      active[ia].weight -= gamma;
      active[is].weight += gamma;
      if (active[ia].weight <= kDropWeight) {
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(ia));
      }
    } else {
      // Global FW step toward w.
      vertex_residual(obj, w_img, e.VR);
      const double gamma =
          clamp_step(raw_gap, 2.0 * (e.R - e.VR).squaredNorm(), 1.0);
      if (gamma >= 1.0) {
        e.X.setZero();
        for (int i = 0; i < mask.size(); ++i) e.X(i, w_img[i]) = 1.0;
        e.R = e.VR;
        active.assign(1, {w_img, 1.0});
      } else {
        e.X *= (1.0 - gamma);
        for (int i = 0; i < mask.size(); ++i) e.X(i, w_img[i]) += gamma;
        e.R = (1.0 - gamma) * e.R + gamma * e.VR;
        bool found = false;
        for (auto& av : active) {
          av.weight *= (1.0 - gamma);
          if (av.img == w_img) {
            av.weight += gamma;
            found = true;
          }
        }
        if (!found) active.push_back({w_img, gamma});
        std::erase_if(active, [](const ActiveVertex& av) {
          return av.weight <= kDropWeight;
        });
      }
    }
    e.resync();
    e.st.iters = t + 1;
  }

  e.st.active_set.reserve(active.size());
  for (auto& av : active) {
    e.st.active_set.emplace_back(Permutation(std::move(av.img)), av.weight);
  }
  return std::move(e).finish();
}

FwState solve_dicg(const QuadraticObjective& obj, const FixingMask& mask,
                   const FwConfig& cfg, const Matrix* start) {
  Engine e(obj, mask, cfg);
  e.X = start ? *start : barycenter(mask);
  e.R = obj.residual(e.X);
  Matrix neg_g;
  std::vector<int> v_img;
  double raw_gap = 0.0;
  for (int t = 0;; ++t) {
    if (e.bookkeeping(t, v_img, raw_gap)) break;

    // Away vertex: LMO on -grad over the face spanned by the support of X.
    bool pairwise = false;
    std::vector<int> a_img;
    try {
      const FixingMask support = e.mask.restricted_to_support(e.X, kSupportTol);
      neg_g = -e.G;
      a_img = lmo(neg_g, support, e.ws).images();
      pairwise = true;
    } catch (const InfeasibleMaskError&) {
      // Degenerate support (thresholding broke feasibility): plain FW step.
    }

    if (pairwise) {
      e.eval_vertex(a_img);
      double gamma_max = kInf;
      for (int i = 0; i < mask.size(); ++i) {
        if (a_img[i] != v_img[i]) gamma_max = std::min(gamma_max, e.X(i, a_img[i]));
      }
      const double num = dot_vertex(e.G, a_img) - dot_vertex(e.G, v_img);
      if (gamma_max == kInf || num <= 0.0) {
        pairwise = false;  // away == fw vertex; fall back to a FW step
      } else {
        vertex_residual(obj, a_img, e.VR);
        vertex_residual(obj, v_img, e.VR2);
        e.VR -= e.VR2;
        const double gamma = clamp_step(num, 2.0 * e.VR.squaredNorm(), gamma_max);
        for (int i = 0; i < mask.size(); ++i) {
          if (a_img[i] == v_img[i]) continue;
          e.X(i, a_img[i]) = std::max(0.0, e.X(i, a_img[i]) - gamma);
          e.X(i, v_img[i]) += gamma;
        }
        e.R -= gamma * e.VR;
        e.resync();
      }
    }
    if (!pairwise) e.fw_step(t, v_img, raw_gap);
    e.st.iters = t + 1;
  }
  return std::move(e).finish();
}

FwState solve_fw(const Graph& a, const Graph& b, const FixingMask& mask,
                 const FwConfig& cfg) {
  return solve_fw(QuadraticObjective::for_graphs(a, b), mask, cfg);
}

FwState solve_bpcg(const Graph& a, const Graph& b, const FixingMask& mask,
                   const FwConfig& cfg) {
  return solve_bpcg(QuadraticObjective::for_graphs(a, b), mask, cfg);
}

FwState solve_dicg(const Graph& a, const Graph& b, const FixingMask& mask,
                   const FwConfig& cfg) {
  return solve_dicg(QuadraticObjective::for_graphs(a, b), mask, cfg);
}

RateConstants RateConstants::for_sizes(int n, int m_a, int m_b) {
  const double root = std::sqrt(static_cast<double>(m_a)) +
                      std::sqrt(static_cast<double>(m_b));
  return {2.0 * root * root, std::sqrt(2.0 * n), 1.0 / n, 1.0};
}

double prop1_bound(int n, int m_a, int m_b, int t) {
  if (n < 1 || m_a < 0 || m_b < 0 || t < 0) {
    throw std::invalid_argument("prop1_bound requires n >= 1, m >= 0, t >= 0");
  }
  const int exponent = t / 2;  // == ceil((t - 1) / 2) for integer t >= 0
  if (m_a == m_b) {
    const double m = m_a;
    if (m == 0.0) return 0.0;
    const double rate = 1.0 - 1.0 / (16.0 * std::pow(static_cast<double>(n), 3) * m * m);
    return 8.0 * m * n * std::pow(rate, exponent);
  }
  const RateConstants c = RateConstants::for_sizes(n, m_a, m_b);
  const double ld2 = c.lipschitz * c.diameter * c.diameter;
  if (ld2 == 0.0) return 0.0;
  const double rate = 1.0 - (c.delta * c.delta) / (2.0 * c.slope * c.slope * ld2);
  return 0.5 * ld2 * std::pow(rate, exponent);
}

}  // namespace gi
