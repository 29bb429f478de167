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

#include <vector>

#include "lslu/hessenberg.hpp"
#include "lslu/operators.hpp"

namespace lslu {

inline constexpr double kLowerSlack = 1e-10;
inline constexpr double kUpperSlack = 1e-8;

struct BoundRow {
  Index k = 0;
  double r_lu = 0.0;
  double r_qr = 0.0;
  double kappa = 1.0;
  bool lower_ok = false;  // r_qr <= r_lu (1 + 1e-10)
  bool upper_ok = false;  // r_lu <= kappa r_qr (1 + 1e-8)
};

struct BoundReport {
  double lambda = 0.0;  // 0 for the unregularized comparison
  std::vector<BoundRow> rows;

  bool all_ok() const;
};

/// LSLU against LSQR from x0 = 0 for up to maxiter iterations. kappa is the
/// condition number of the triangular factor of a dense QR of D_{k+1}.
/// Breakdown of either process truncates the report.
BoundReport unregularized_bounds(const LinearOperator& op, const VectorXd& b, Index maxiter,
                            const PivotStrategy& pivot = PivotStrategy::full_pivoting());

/// Hybrid LSLU against Hybrid LSQR with the same fixed lambda. Residuals are
/// the stacked sqrt(||b - A x||^2 + lambda^2 ||x||^2); kappa is that of
/// blkdiag(D_{k+1}, L_k), from its SVD.
BoundReport regularized_bounds(const LinearOperator& op, const VectorXd& b, double lambda,
                            Index maxiter,
                            const PivotStrategy& pivot = PivotStrategy::full_pivoting());

struct RelationResiduals {
  double forward = 0.0;  // ||A L_k - D_{k+1} H_{k+1,k}||_F
  double adjoint = 0.0;  // ||A^T D_k - L_k W_k||_F
};

RelationResiduals relation_residuals(const HessenbergState& state, const LinearOperator& op);

/// Condition number from the R factor of a Householder QR.
double condition_number_qr(const MatrixXd& M);
/// Condition number from the singular values (ratio of extreme ones).
double condition_number_svd(const MatrixXd& M);

MatrixXd block_diagonal(const MatrixXd& top_left, const MatrixXd& bottom_right);

}  // namespace lslu
