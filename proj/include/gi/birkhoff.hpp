// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gi/graph.hpp"

namespace gi {

/// Thrown when a face of the Birkhoff polytope contains no permutation
/// matrix (the non-Zero pattern has no perfect matching).
struct InfeasibleMaskError : std::runtime_error {
  InfeasibleMaskError() : std::runtime_error("fixing mask admits no permutation") {}
  explicit InfeasibleMaskError(const std::string& what) : std::runtime_error(what) {}
};

enum class EntryState : std::uint8_t { Free, Zero, One };

/// A face of the Birkhoff polytope: every entry is Free, fixed to Zero or
/// fixed to One. Eagerly normalized — fixing an entry to One turns the rest
/// of its row and column into Zeros, so at most one One per row/column ever
/// exists and lookups stay O(1).
class FixingMask {
 public:
  explicit FixingMask(int n);

  int size() const { return n_; }
  EntryState at(int i, int j) const { return state_[index(i, j)]; }
  bool is_free(int i, int j) const { return at(i, j) == EntryState::Free; }

  /// Number of non-Free entries (Zeros implied by Ones included).
  int fixed_count() const { return fixed_; }
  int one_count() const { return ones_; }

  /// Column of the One in row i, or -1; inverse lookup for columns.
  int one_in_row(int i) const { return row_one_[i]; }
  int one_in_col(int j) const { return col_one_[j]; }

  /// Returns a copy with (i, j) fixed to `value` (Zero or One) and the One
  /// normalization applied. Throws std::logic_error if the entry is not Free
  /// or the fix conflicts with an existing One.
  FixingMask with_fix(int i, int j, EntryState value) const;

  /// Returns a copy whose Free entries with x(i, j) <= tol become Zero:
  /// the face spanned by the support of an iterate x.
  FixingMask restricted_to_support(const Matrix& x, double tol) const;

  /// In-place Zero fix for bulk mask construction (no copy per entry).
  /// Idempotent on Zeros; throws std::logic_error on a One.
  void fix_zero(int i, int j);

  bool operator==(const FixingMask& other) const {
    return n_ == other.n_ && state_ == other.state_;
  }

 private:
  int index(int i, int j) const { return i * n_ + j; }
  void set_zero(int i, int j);

  int n_ = 0;
  std::vector<EntryState> state_;
  std::vector<int> row_one_, col_one_;
  int fixed_ = 0;
  int ones_ = 0;
};

/// True iff the face contains at least one permutation matrix (perfect
/// matching on the non-Zero pattern; Kuhn's augmenting paths).
bool mask_feasible(const FixingMask& mask);

/// Entries that lie on at least one permutation matrix of the face. Throws
/// InfeasibleMaskError when the face is empty. Off-core entries are zero in
/// every doubly stochastic matrix of the face.
Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> support_core(const FixingMask& mask);

/// Reusable scratch buffers for lmo(); callers on a hot path keep one
/// instance alive to avoid reallocation.
struct LmoWorkspace {
  std::vector<int> free_rows, free_cols, col_pos;
  std::vector<double> u, v, minv;
  std::vector<int> p, way;
  std::vector<char> used;
};

/// Linear minimization oracle over the face: argmin_P <cost, P> among
/// permutations consistent with the mask. Hungarian algorithm with
/// potentials on the Free block (One rows/columns are deleted first,
/// Zero entries are forbidden). Deterministic: rows are processed in
/// increasing index and column scans break ties toward lower indices.
/// Throws InfeasibleMaskError when the face is empty. O(n^3).
Permutation lmo(const Matrix& cost, const FixingMask& mask, LmoWorkspace& ws);
Permutation lmo(const Matrix& cost, const FixingMask& mask);
Permutation lmo(const Matrix& cost);

/// Doubly stochastic barycenter of the face: Ones are exactly 1, Zeros (and
/// all off-core entries) exactly 0, row/column sums within 1e-8 of 1.
/// Sinkhorn scaling of the support-core indicator.
Matrix barycenter(const FixingMask& mask);

/// Reprojects an iterate onto a (sub)face for warm starts: clips to the
/// support core, mixes in a small uniform mass so Sinkhorn has total
/// support, and rescales to doubly stochastic.
Matrix project_to_face(const Matrix& x, const FixingMask& mask);

}  // namespace gi
