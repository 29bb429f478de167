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
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace lslu {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Matrix-free linear map A : R^n -> R^m together with its adjoint.
///
/// Operators are immutable after construction and cheap to copy (the
/// underlying data is shared), so several solves may use one concurrently.
class LinearOperator {
 public:
  using Apply = std::function<VectorXd(const VectorXd&)>;

  LinearOperator(Index rows, Index cols, Apply forward, Apply adjoint);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }

  /// y = A x. Throws on a length mismatch.
  VectorXd forward(const VectorXd& x) const;
  /// x = A^T y. Throws on a length mismatch.
  VectorXd adjoint(const VectorXd& y) const;

  /// Backing dense matrix, when the operator was built from one.
  const MatrixXd* dense() const noexcept { return dense_.get(); }
  /// Backing sparse matrix, when the operator was built from one.
  const SparseMatrix* sparse() const noexcept { return sparse_.get(); }

  /// Assembles the operator column by column. Intended for small problems
  /// and oracle checks.
  MatrixXd to_dense() const;

 private:
  friend LinearOperator make_dense_operator(MatrixXd matrix);
  friend LinearOperator make_sparse_operator(SparseMatrix matrix);

  Index rows_;
  Index cols_;
  Apply forward_;
  Apply adjoint_;
  std::shared_ptr<const MatrixXd> dense_;
  std::shared_ptr<const SparseMatrix> sparse_;
};

LinearOperator make_dense_operator(MatrixXd matrix);
LinearOperator make_sparse_operator(SparseMatrix matrix);

/// Operator plus a known truth and the synthetic data generated from it.
struct InverseProblem {
  LinearOperator op;
  VectorXd x_true;
  VectorXd b_exact;
  VectorXd b;
  VectorXd e;
  double noise_level = 0.0;
  std::uint64_t seed = 0;
  /// Image layout of x (rows, cols) for 2D problems.
  std::optional<std::pair<Index, Index>> image_shape;
  /// Layout of b (angles, detectors) for tomography data.
  std::optional<std::pair<Index, Index>> data_shape;

  /// Noise variance per datum, ||e||^2 / m.
  double noise_variance() const;
};

struct NoisyData {
  VectorXd b;
  VectorXd e;
};

/// b = b_exact + e with ||e|| = noise_level * ||b_exact|| exactly (up to
/// rounding); the direction of e is a seeded standard normal draw.
NoisyData add_noise(const VectorXd& b_exact, double noise_level, std::uint64_t seed);

/// Midpoint discretization of the 1D gravity-surveying kernel
/// depth * (depth^2 + (s - t)^2)^(-3/2) on [0,1]^2, scaled by 1/n.
/// Truth: sin(pi t) + 0.5 sin(2 pi t) at the midpoints.
InverseProblem make_gravity_problem(Index n, double depth, double noise_level,
                                    std::uint64_t seed);

struct TomoGeometry {
  Index grid = 16;       // image is grid x grid unit cells
  Index n_angles = 16;   // angles j*pi/n_angles, j = 0..n_angles-1
  Index n_detectors = 23;
  /// Detector spacing; rays span the circumscribed circle of the image by
  /// default (spacing = sqrt(2) * grid / n_detectors).
  std::optional<double> spacing;

  static TomoGeometry with_defaults(Index grid);
};

/// Parallel-beam line-integral operator on a grid x grid image with a
/// centered disk phantom (value 1, radius 0.35 * grid).
InverseProblem make_tomo_problem(const TomoGeometry& geometry, double noise_level,
                                 std::uint64_t seed);

struct RaySegment {
  Index cell;     // row-major cell index, row * grid + col
  double length;  // intersection length with that cell
};

/// Exact intersection of the infinite line origin + tau * direction with the
/// cells of a grid x grid unit-cell image occupying [0, grid]^2. Cells are
/// indexed row-major with row = floor(y), col = floor(x).
std::vector<RaySegment> trace_ray(Index grid, Eigen::Vector2d origin,
                                  Eigen::Vector2d direction);

}  // namespace lslu
