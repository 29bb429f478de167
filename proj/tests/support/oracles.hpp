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

// Reference computations for the tests. Everything here works on explicit
// dense matrices and avoids the library's own algorithms.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace oracle {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

inline MatrixXd random_matrix(Index m, Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  MatrixXd A(m, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < m; ++i) A(i, j) = normal(rng);
  }
  return A;
}

inline VectorXd random_vector(Index n, std::uint64_t seed) {
  return random_matrix(n, 1, seed).col(0);
}

// U diag(s) V^T with singular values spaced evenly in [s_min, s_max].
inline MatrixXd conditioned_matrix(Index m, Index n, double s_min, double s_max,
                                   std::uint64_t seed) {
  const Eigen::HouseholderQR<MatrixXd> qu(random_matrix(m, m, seed));
  const Eigen::HouseholderQR<MatrixXd> qv(random_matrix(n, n, seed + 1));
  const MatrixXd U = qu.householderQ();
  const MatrixXd V = qv.householderQ();
  const Index r = std::min(m, n);
  MatrixXd S = MatrixXd::Zero(m, n);
  for (Index i = 0; i < r; ++i) {
    S(i, i) = r == 1 ? s_max : s_max - (s_max - s_min) * static_cast<double>(i) / (r - 1);
  }
  return U * S * V.transpose();
}

inline double gravity_entry(Index n, double depth, Index i, Index j) {
  const double h = 1.0 / static_cast<double>(n);
  const double s = (static_cast<double>(i) + 0.5) * h;
  const double t = (static_cast<double>(j) + 0.5) * h;
  return h * depth / std::pow(depth * depth + (s - t) * (s - t), 1.5);
}

inline Index numerical_rank(const MatrixXd& M, double rtol) {
  if (M.cols() == 0) return 0;
  const VectorXd s = Eigen::JacobiSVD<MatrixXd>(M).singularValues();
  Index r = 0;
  while (r < s.size() && s(r) > rtol * s(0)) ++r;
  return r;
}

// Columns scaled to unit norm; keeps rank tests meaningful for Krylov
// matrices whose columns grow geometrically.
inline MatrixXd normalize_columns(MatrixXd M) {
  for (Index j = 0; j < M.cols(); ++j) M.col(j).normalize();
  return M;
}

// [v, M v, ..., M^{k-1} v].
inline MatrixXd krylov_matrix(const MatrixXd& M, const VectorXd& v, Index k) {
  MatrixXd K(v.size(), k);
  K.col(0) = v;
  for (Index j = 1; j < k; ++j) K.col(j) = M * K.col(j - 1);
  return K;
}

// Largest distance of a unit column of B from span(A).
inline double span_gap(const MatrixXd& A, const MatrixXd& B) {
  const MatrixXd Q = Eigen::HouseholderQR<MatrixXd>(A).householderQ() *
                     MatrixXd::Identity(A.rows(), A.cols());
  const MatrixXd Bn = normalize_columns(B);
  return (Bn - Q * (Q.transpose() * Bn)).colwise().norm().maxCoeff();
}

inline VectorXd tikhonov(const MatrixXd& A, const VectorXd& b, double lambda) {
  MatrixXd M = A.transpose() * A;
  M.diagonal().array() += lambda * lambda;
  return M.ldlt().solve(A.transpose() * b);
}

// argmin ||Wr (b - A x)||^2 + lambda^2 ||Wx x||^2.
inline VectorXd weighted_tikhonov(const MatrixXd& A, const VectorXd& b, const MatrixXd& Wr,
                                  const MatrixXd& Wx, double lambda) {
  const MatrixXd WA = Wr * A;
  MatrixXd M = WA.transpose() * WA + lambda * lambda * Wx.transpose() * Wx;
  return M.ldlt().solve(WA.transpose() * (Wr * b));
}

// Trace and norm forms of the projected selection functions, written from
// the definitions with an explicit regularized pseudo-inverse.
inline MatrixXd influence(const MatrixXd& H, double lambda) {
  MatrixXd M = H.transpose() * H;
  M.diagonal().array() += lambda * lambda;
  return H * M.ldlt().solve(MatrixXd(H.transpose()));
}

inline double gcv_direct(const MatrixXd& H, double beta, double lambda) {
  const Index k = H.cols();
  const MatrixXd I = MatrixXd::Identity(k + 1, k + 1);
  const MatrixXd P = influence(H, lambda);
  VectorXd be1 = VectorXd::Zero(k + 1);
  be1(0) = beta;
  const double t = (I - P).trace();
  return static_cast<double>(k) * (be1 - P * be1).squaredNorm() / (t * t);
}

inline double wgcv_direct(const MatrixXd& H, double beta, double lambda, double omega) {
  const Index k = H.cols();
  const MatrixXd I = MatrixXd::Identity(k + 1, k + 1);
  const MatrixXd P = influence(H, lambda);
  VectorXd be1 = VectorXd::Zero(k + 1);
  be1(0) = beta;
  const double t = (I - omega * P).trace();
  return static_cast<double>(k) * (be1 - P * be1).squaredNorm() / (t * t);
}

inline double ghat_direct(const MatrixXd& H, double beta, double lambda, Index m, Index n) {
  const Index k = H.cols();
  const MatrixXd P = influence(H, lambda);
  VectorXd be1 = VectorXd::Zero(k + 1);
  be1(0) = beta;
  const double t = static_cast<double>(m) - P.trace();
  return static_cast<double>(n) * (be1 - P * be1).squaredNorm() / (t * t);
}

}  // namespace oracle
