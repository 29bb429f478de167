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

#include <optional>

#include "lslu/golub_kahan.hpp"
#include "lslu/hessenberg.hpp"

namespace lslu {

/// Low-rank posterior covariance for the Gaussian model with
///   Gamma = sigma2 (reg I + A^T A)^{-1},
/// using A^T A ~= Z diag(spectrum) Z^T. By Woodbury,
///   Gamma_k = (sigma2 / reg) (I - Z Delta Z^T),
///   Delta   = (Z^T Z + reg diag(spectrum)^{-1})^{-1}.
/// Callers wanting the prior N(0, alpha^2 I) pass reg = (sigma / alpha)^2.
struct UqApprox {
  MatrixXd Z;         // n x r
  VectorXd spectrum;  // r, nonincreasing, positive
  MatrixXd Delta;     // r x r, symmetric positive definite
  double sigma2 = 1.0;
  double reg = 1.0;
  Index requested_k = 0;  // basis columns offered
  bool truncated = false; // basis columns dropped for ill-conditioning

  Index rank() const noexcept { return spectrum.size(); }
};

/// Gram matrices with condition number above this are truncated.
inline constexpr double kMaxGramCondition = 1e12;

/// From the Hessenberg factors: A^T A ~= A^T D_k D_k^+ A = L_k W_k (D_k^T D_k)^{-1} W_k^T L_k^T.
/// Uses the first k columns (default: all completed steps).
UqApprox build_uq(const HessenbergState& state, double sigma2, double reg,
                  std::optional<Index> k = std::nullopt);

/// From the Golub-Kahan factors: A^T A ~= V_k R_k R_k^T V_k^T, where
/// A^T U_k = V_k R_k and R_k is the transposed leading block of B.
UqApprox build_uq(const BidiagState& state, double sigma2, double reg,
                  std::optional<Index> k = std::nullopt);

/// Builds Delta from an explicit factorization A^T A ~= Z diag(spectrum) Z^T.
UqApprox make_uq(MatrixXd Z, VectorXd spectrum, double sigma2, double reg);

VectorXd variance_diagonal(const UqApprox& uq);
/// 1^T Gamma_k 1.
double covariance_sum(const UqApprox& uq);
/// Dense Gamma_k, for small n.
MatrixXd posterior_covariance(const UqApprox& uq);

/// sigma2 (reg I + A^T A)^{-1}, for n <= 200.
MatrixXd oracle_posterior(const MatrixXd& A, double sigma2, double reg);

}  // namespace lslu
