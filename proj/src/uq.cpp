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

#include "lslu/uq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "lslu/error.hpp"

namespace lslu {

namespace {

Index resolve_k(std::optional<Index> k, Index available) {
  const Index chosen = k.value_or(available);
  require(chosen >= 1 && chosen <= available, "build_uq: k outside [1, completed steps]");
  return chosen;
}

double gram_condition(const MatrixXd& G) {
  const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(G, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues()(0);
  const double hi = eig.eigenvalues()(G.rows() - 1);
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

// A^T A ~= Q W G^{-1} W^T Q^T with Q n x k, W k x k and G the k x k Gram
// matrix of the residual basis.
UqApprox from_factors(const MatrixXd& Q, const MatrixXd& W, const MatrixXd& G, double sigma2,
                      double reg) {
  const Index k = Q.cols();
  Index used = k;
  while (used > 1 && gram_condition(G.topLeftCorner(used, used)) > kMaxGramCondition) --used;
  if (gram_condition(G.topLeftCorner(used, used)) > kMaxGramCondition) used = 0;

  MatrixXd Z(Q.rows(), 0);
  VectorXd spectrum(0);
  if (used > 0) {
    const MatrixXd Wu = W.topLeftCorner(used, used);
    const MatrixXd X = G.topLeftCorner(used, used).ldlt().solve(Wu.transpose());
    MatrixXd M = Wu * X;
    M = 0.5 * (M + M.transpose()).eval();
    const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(M);
    if (eig.info() != Eigen::Success) fail(ErrorCode::numerical, "build_uq: eigensolver failed");
    const VectorXd values = eig.eigenvalues().reverse();
    const MatrixXd vectors = eig.eigenvectors().rowwise().reverse();
    const double cutoff = 1e-14 * std::max(values(0), 0.0);
    Index keep = 0;
    while (keep < values.size() && values(keep) > cutoff) ++keep;
    spectrum = values.head(keep);
    Z = Q.leftCols(used) * vectors.leftCols(keep);
  }
  UqApprox out = make_uq(std::move(Z), std::move(spectrum), sigma2, reg);
  out.requested_k = k;
  out.truncated = used < k;
  return out;
}

}  // namespace

UqApprox make_uq(MatrixXd Z, VectorXd spectrum, double sigma2, double reg) {
  require(std::isfinite(reg) && reg > 0.0, "make_uq: reg must be positive");
  require(std::isfinite(sigma2) && sigma2 >= 0.0, "make_uq: sigma2 must be >= 0");
  require(Z.cols() == spectrum.size(), "make_uq: Z and spectrum disagree in size");
  require((spectrum.array() > 0.0).all(), "make_uq: spectrum must be positive");

  UqApprox out;
  const Index r = spectrum.size();
  MatrixXd M = Z.transpose() * Z;
  M.diagonal() += reg * spectrum.cwiseInverse();
  if (r > 0) {
    const Eigen::LDLT<MatrixXd> ldlt(M);
    if (ldlt.info() != Eigen::Success) fail(ErrorCode::numerical, "make_uq: singular system");
    MatrixXd Delta = ldlt.solve(MatrixXd::Identity(r, r));
    out.Delta = 0.5 * (Delta + Delta.transpose());
  } else {
    out.Delta = MatrixXd(0, 0);
  }
  out.Z = std::move(Z);
  out.spectrum = std::move(spectrum);
  out.sigma2 = sigma2;
  out.reg = reg;
  out.requested_k = r;
  return out;
}

UqApprox build_uq(const HessenbergState& state, double sigma2, double reg,
                  std::optional<Index> k) {
  const Index kk = resolve_k(k, state.k());
  const MatrixXd D = state.D().leftCols(kk);
  return from_factors(state.L().leftCols(kk), state.W().topLeftCorner(kk, kk),
                      D.transpose() * D, sigma2, reg);
}

UqApprox build_uq(const BidiagState& state, double sigma2, double reg,
                  std::optional<Index> k) {
  const Index kk = resolve_k(k, state.k());
  const MatrixXd R = state.B().topLeftCorner(kk, kk).transpose();
  return from_factors(state.V().leftCols(kk), R, MatrixXd::Identity(kk, kk), sigma2, reg);
}

VectorXd variance_diagonal(const UqApprox& uq) {
  const double scale = uq.sigma2 / uq.reg;
  const VectorXd reduction = ((uq.Z * uq.Delta).array() * uq.Z.array()).rowwise().sum();
  return scale * (1.0 - reduction.array()).matrix();
}

double covariance_sum(const UqApprox& uq) {
  const double scale = uq.sigma2 / uq.reg;
  const VectorXd s = uq.Z.colwise().sum().transpose();
  return scale * (static_cast<double>(uq.Z.rows()) - s.dot(uq.Delta * s));
}

MatrixXd posterior_covariance(const UqApprox& uq) {
  const Index n = uq.Z.rows();
  const double scale = uq.sigma2 / uq.reg;
  return scale * (MatrixXd::Identity(n, n) - uq.Z * uq.Delta * uq.Z.transpose());
}

MatrixXd oracle_posterior(const MatrixXd& A, double sigma2, double reg) {
  require(A.cols() <= 200, "oracle_posterior: limited to n <= 200");
  require(reg > 0.0, "oracle_posterior: reg must be positive");
  const Index n = A.cols();
  MatrixXd M = A.transpose() * A;
  M.diagonal().array() += reg;
  return sigma2 * M.ldlt().solve(MatrixXd::Identity(n, n));
}

}  // namespace lslu
