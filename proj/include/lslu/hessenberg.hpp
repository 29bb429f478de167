// Copyright 2026 The LSLU Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "lslu/detail/growing_matrix.hpp"
#include "lslu/operators.hpp"

namespace lslu {

enum class PivotKind { none, full, sampled };

/// How the Hessenberg process picks its divisors.
///
/// `none` always uses the leading eligible entry, `full` the entry of largest
/// magnitude in the eligible window, and `sampled` the largest entry among
/// `sample_size` window positions drawn uniformly without replacement. A
/// sample at least as large as the window is the whole window.
struct PivotStrategy {
  PivotKind kind = PivotKind::full;
  Index sample_size = 0;
  std::uint64_t seed = 0;

  static PivotStrategy no_pivoting() { return {PivotKind::none, 0, 0}; }
  static PivotStrategy full_pivoting() { return {PivotKind::full, 0, 0}; }
  static PivotStrategy sampled(Index sample_size, std::uint64_t seed) {
    return {PivotKind::sampled, sample_size, seed};
  }
};

enum class Breakdown {
  none,
  exact_solution,  // residual space exhausted, H(k+1,k) = 0
  rank_deficient,  // no new solution-basis vector could be pivoted
  zero_pivot,      // unpivoted process hit a zero divisor on a nonzero vector
};

const char* to_string(Breakdown b) noexcept;

/// Relative threshold under which a candidate divisor counts as zero. The
/// reference is the infinity norm of the vector before elimination.
inline constexpr double kBreakdownTol = 1e-14;

/// State of the rectangular Hessenberg process after k steps.
///
///   A L_k     = D_{k+1} H_{k+1,k}
///   A^T D_k   = L_k W_k
///
/// L and D are unit lower triangular up to the row permutations g and t:
/// l_j(g(j)) = 1 and l_j(g(i)) = 0 for i < j, with the same for d_j and t.
/// When the step that produced column k exhausted the residual space,
/// H(k+1,k) = 0 and D holds only k columns.
class HessenbergState {
 public:
  Index k() const noexcept { return k_; }
  Index rows() const noexcept { return m_; }
  Index cols() const noexcept { return n_; }

  auto L() const { return l_.view().leftCols(k_); }
  auto D() const { return d_.view(); }
  auto H() const { return h_.view().topLeftCorner(k_ + 1, k_); }
  auto W() const { return w_.view().topLeftCorner(k_, k_); }

  /// Residual-basis columns available (k + 1, or k after exhaustion).
  Index residual_columns() const noexcept { return d_.cols(); }

  const std::vector<Index>& row_perm() const noexcept { return t_; }
  const std::vector<Index>& col_perm() const noexcept { return g_; }
  double beta() const noexcept { return beta_; }
  Breakdown breakdown() const noexcept { return breakdown_; }
  const VectorXd& r0() const noexcept { return r0_; }
  const VectorXd& x0() const noexcept { return x0_; }
  const PivotStrategy& strategy() const noexcept { return strategy_; }

 private:
  friend HessenbergState hess_init(const LinearOperator&, const VectorXd&,
                                   const VectorXd&, const PivotStrategy&);
  friend void hess_step(HessenbergState&, const LinearOperator&);

  Index m_ = 0;
  Index n_ = 0;
  Index k_ = 0;
  detail::GrowingMatrix l_;
  detail::GrowingMatrix d_;
  detail::GrowingMatrix h_;
  detail::GrowingMatrix w_;
  std::vector<Index> t_;
  std::vector<Index> g_;
  double beta_ = 0.0;
  Breakdown breakdown_ = Breakdown::none;
  VectorXd r0_;
  VectorXd x0_;
  PivotStrategy strategy_;
  std::mt19937_64 rng_;
};

/// r0 = b - A x0, first pivot and d_1 = r0 / beta. A vanishing r0 yields an
/// exact_solution state with k = 0. Throws Error(breakdown) when the
/// unpivoted process meets r0(1) = 0 on a nonzero residual.
HessenbergState hess_init(const LinearOperator& op, const VectorXd& b,
                          const VectorXd& x0, const PivotStrategy& strategy);

/// Appends l_{k+1}, column k+1 of W and H, and d_{k+2}. On breakdown the
/// state keeps its previous columns (except for the exact_solution case,
/// where the new l and H column are kept with H(k+2,k+1) = 0).
void hess_step(HessenbergState& state, const LinearOperator& op);

/// Runs hess_init then hess_step until maxiter steps or a breakdown.
HessenbergState hess_run(const LinearOperator& op, const VectorXd& b,
                         const VectorXd& x0, const PivotStrategy& strategy,
                         Index maxiter);

}  // namespace lslu
