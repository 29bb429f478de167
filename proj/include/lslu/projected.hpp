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

#include <functional>
#include <optional>
#include <span>

#include <Eigen/Core>

#include "lslu/operators.hpp"

namespace lslu {

/// Full SVD of a (k+1) x k projected matrix, H = U diag(sigma) V^T.
struct ProjectedSvd {
  MatrixXd U;      // (k+1) x (k+1)
  VectorXd sigma;  // k, nonincreasing
  MatrixXd V;      // k x k
  VectorXd ue1;    // U^T e_1

  Index k() const noexcept { return sigma.size(); }
};

/// Signs are canonical: the largest-magnitude entry of every column of V,
/// and of the trailing column of U, is positive.
ProjectedSvd svd_small(const MatrixXd& H);

/// Minimizer of ||beta e_1 - H y||^2 + lambda^2 ||y||^2. With lambda = 0
/// a numerically rank-deficient H (sigma_k <= 1e-14 sigma_1) is an error.
VectorXd tikhonov_projected(const ProjectedSvd& svd, double beta, double lambda);

/// Minimum-norm least-squares solution of min ||beta e_1 - H y||, dropping
/// singular values at or below 1e-14 sigma_1.
VectorXd least_squares_projected(const ProjectedSvd& svd, double beta);

/// Filter factors lambda^2 / (sigma_i^2 + lambda^2) applied to U^T e_1;
/// returns sum_i (f_i ue1_i)^2 + ue1_{k+1}^2.
double residual_filter_sum(const ProjectedSvd& svd, double lambda);

double gcv_value(const ProjectedSvd& svd, double beta, double lambda);
double wgcv_value(const ProjectedSvd& svd, double beta, double lambda, double omega);

/// omega = (k+1)/m clamped to [0, 1].
double wgcv_weight(Index k, Index m);

/// Stopping function for the iteration count. m is the number of rows and n
/// the number of columns of the full problem; requires m > k.
double ghat(const ProjectedSvd& svd, double beta, double lambda, Index m, Index n);

enum class LambdaKind { fixed, gcv, wgcv, optimal };

struct LambdaRule {
  LambdaKind kind = LambdaKind::wgcv;
  double value = 0.0;          // fixed only
  std::optional<double> lo;    // search window; default [max(1e-12, 1e-6 s1), s1]
  std::optional<double> hi;

  static LambdaRule fixed(double lambda) { return {LambdaKind::fixed, lambda, {}, {}}; }
  static LambdaRule gcv() { return {LambdaKind::gcv, 0.0, {}, {}}; }
  static LambdaRule wgcv() { return {LambdaKind::wgcv, 0.0, {}, {}}; }
  static LambdaRule optimal() { return {LambdaKind::optimal, 0.0, {}, {}}; }
};

/// Error of x0 + Q y against a reference, with Q the current solution
/// basis, kept as small Gram data:
///   ||x0 + Q y - x_true||^2 = offset_sq - 2 y^T cross + y^T gram y.
struct SolutionErrorModel {
  MatrixXd gram;     // Q^T Q
  VectorXd cross;    // Q^T (x_true - x0)
  double offset_sq;  // ||x_true - x0||^2

  double error(const VectorXd& y) const;
};

/// Picks lambda_k. gcv, wgcv and optimal minimize over log10(lambda): a
/// 41-point grid brackets the minimum, golden-section search refines it
/// (tolerance 1e-3 in log10, at most 200 iterations), and the best of the
/// refined point and the two window ends is returned.
double select_lambda(const LambdaRule& rule, const ProjectedSvd& svd, double beta, Index m,
                     const SolutionErrorModel* truth = nullptr);

/// The search used by select_lambda, exposed for testing.
double minimize_log_scale(const std::function<double(double)>& f, double lo, double hi);

enum class StopCheck { keep_going, converged, disabled };

/// |G(k+1) - G(k)| / G(1) < tol on the two latest entries.
StopCheck stop_check(std::span<const double> history, double tol);

}  // namespace lslu
