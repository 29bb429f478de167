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

#include "lslu/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "lslu/error.hpp"
#include "lslu/solvers.hpp"

namespace lslu {

namespace {

// Residuals that vanish in exact arithmetic are compared against this
// multiple of the data norm instead of zero.
constexpr double kAbsoluteFloor = 1e-13;

double ratio_of_extremes(const VectorXd& sv) {
  if (sv.size() == 0) return 1.0;
  const double smallest = sv(sv.size() - 1);
  if (!(smallest > 0.0)) return std::numeric_limits<double>::infinity();
  return sv(0) / smallest;
}

BoundRow make_row(Index k, double r_lu, double r_qr, double kappa, double floor) {
  BoundRow row;
  row.k = k;
  row.r_lu = r_lu;
  row.r_qr = r_qr;
  row.kappa = kappa;
  row.lower_ok = r_qr <= r_lu * (1.0 + kLowerSlack) + floor;
  row.upper_ok = r_lu <= kappa * r_qr * (1.0 + kUpperSlack) + floor;
  return row;
}

SolverConfig bound_config(Index maxiter, const PivotStrategy& pivot, double lambda) {
  SolverConfig config;
  config.maxiter = maxiter;
  config.pivot = pivot;
  config.lambda_rule = LambdaRule::fixed(lambda);
  config.reorth = true;
  return config;
}

// D_{k+1}, or D_k once the process has exhausted the rows.
MatrixXd residual_basis(const HessenbergState& state, Index k) {
  return state.D().leftCols(std::min(k + 1, state.residual_columns()));
}

}  // namespace

bool BoundReport::all_ok() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const BoundRow& r) { return r.lower_ok && r.upper_ok; });
}

double condition_number_qr(const MatrixXd& M) {
  require(M.cols() >= 1 && M.rows() >= M.cols(), "condition_number_qr: need a tall matrix");
  const Eigen::HouseholderQR<MatrixXd> qr(M);
  const MatrixXd R = qr.matrixQR().topRows(M.cols()).triangularView<Eigen::Upper>();
  return ratio_of_extremes(Eigen::JacobiSVD<MatrixXd>(R).singularValues());
}

double condition_number_svd(const MatrixXd& M) {
  require(M.cols() >= 1 && M.rows() >= M.cols(), "condition_number_svd: need a tall matrix");
  return ratio_of_extremes(Eigen::JacobiSVD<MatrixXd>(M).singularValues());
}

MatrixXd block_diagonal(const MatrixXd& top_left, const MatrixXd& bottom_right) {
  MatrixXd out = MatrixXd::Zero(top_left.rows() + bottom_right.rows(),
                                top_left.cols() + bottom_right.cols());
  out.topLeftCorner(top_left.rows(), top_left.cols()) = top_left;
  out.bottomRightCorner(bottom_right.rows(), bottom_right.cols()) = bottom_right;
  return out;
}

BoundReport unregularized_bounds(const LinearOperator& op, const VectorXd& b, Index maxiter,
                            const PivotStrategy& pivot) {
  const SolverConfig config = bound_config(maxiter, pivot, 0.0);
  const SolveResult lu = run_lslu(op, b, config);
  const SolveResult qr = run_lsqr(op, b, config);
  const double floor = kAbsoluteFloor * b.norm();

  BoundReport report;
  const Index steps = std::min(lu.k_reached, qr.k_reached);
  for (Index k = 1; k <= steps; ++k) {
    const auto i = static_cast<std::size_t>(k - 1);
    const double kappa = condition_number_qr(residual_basis(*lu.hessenberg, k));
    report.rows.push_back(make_row(k, lu.residual_norm[i], qr.residual_norm[i], kappa, floor));
  }
  return report;
}

BoundReport regularized_bounds(const LinearOperator& op, const VectorXd& b, double lambda,
                            Index maxiter, const PivotStrategy& pivot) {
  require(std::isfinite(lambda) && lambda > 0.0, "regularized_bounds: lambda must be positive");
  const SolverConfig config = bound_config(maxiter, pivot, lambda);
  const SolveResult lu = run_hybrid_lslu(op, b, config);
  const SolveResult qr = run_hybrid_lsqr(op, b, config);
  const double floor = kAbsoluteFloor * b.norm();

  auto stacked = [lambda](double residual, const VectorXd& x) {
    const double reg = lambda * x.norm();
    return std::sqrt(residual * residual + reg * reg);
  };

  BoundReport report;
  report.lambda = lambda;
  const Index steps = std::min(lu.k_reached, qr.k_reached);
  for (Index k = 1; k <= steps; ++k) {
    const auto i = static_cast<std::size_t>(k - 1);
    const double r_lu = stacked(lu.residual_norm[i], lu.solution_at(k));
    const double r_qr = stacked(qr.residual_norm[i], qr.solution_at(k));
    const HessenbergState& s = *lu.hessenberg;
    const double kappa =
        condition_number_svd(block_diagonal(residual_basis(s, k), s.L().leftCols(k)));
    report.rows.push_back(make_row(k, r_lu, r_qr, kappa, floor));
  }
  return report;
}

RelationResiduals relation_residuals(const HessenbergState& state, const LinearOperator& op) {
  const Index k = state.k();
  require(k >= 1, "relation_residuals: no completed steps");
  const MatrixXd L = state.L();
  const MatrixXd D = state.D();
  const MatrixXd H = state.H();

  MatrixXd AL(op.rows(), k);
  for (Index j = 0; j < k; ++j) AL.col(j) = op.forward(L.col(j));
  const Index dcols = D.cols();
  const double forward = (AL - D * H.topRows(dcols)).norm();

  MatrixXd AtD(op.cols(), k);
  for (Index j = 0; j < k; ++j) AtD.col(j) = op.adjoint(D.col(j));
  const double adjoint = (AtD - L * MatrixXd(state.W())).norm();
  return {forward, adjoint};
}

}  // namespace lslu
