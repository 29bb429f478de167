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

#include "lslu/detail/growing_matrix.hpp"
#include "lslu/operators.hpp"

namespace lslu {

enum class BidiagStatus { running, exact_solution, rank_deficient };

const char* to_string(BidiagStatus s) noexcept;

/// Golub-Kahan lower bidiagonalization A V_k = U_{k+1} B_k.
class BidiagState {
 public:
  Index k() const noexcept { return k_; }
  Index rows() const noexcept { return m_; }
  Index cols() const noexcept { return n_; }

  auto U() const { return u_.view(); }
  auto V() const { return v_.view().leftCols(k_); }
  /// (k+1) x k lower bidiagonal.
  auto B() const { return b_.view().topLeftCorner(k_ + 1, k_); }

  double beta1() const noexcept { return beta1_; }
  bool reorth() const noexcept { return reorth_; }
  BidiagStatus status() const noexcept { return status_; }
  const VectorXd& x0() const noexcept { return x0_; }

 private:
  friend BidiagState gk_init(const LinearOperator&, const VectorXd&, const VectorXd&, bool);
  friend void gk_step(BidiagState&, const LinearOperator&);

  Index m_ = 0;
  Index n_ = 0;
  Index k_ = 0;
  detail::GrowingMatrix u_;
  detail::GrowingMatrix v_;
  detail::GrowingMatrix b_;
  double beta1_ = 0.0;
  bool reorth_ = true;
  BidiagStatus status_ = BidiagStatus::running;
  VectorXd x0_;
};

BidiagState gk_init(const LinearOperator& op, const VectorXd& b, const VectorXd& x0,
                    bool reorth);
void gk_step(BidiagState& state, const LinearOperator& op);

/// Runs up to maxiter steps; a zero norm ends the run early with a status.
BidiagState gk_run(const LinearOperator& op, const VectorXd& b, const VectorXd& x0,
                   Index maxiter, bool reorth = true);

}  // namespace lslu
