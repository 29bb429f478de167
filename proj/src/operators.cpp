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

#include "lslu/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "lslu/error.hpp"

namespace lslu {

LinearOperator::LinearOperator(Index rows, Index cols, Apply forward, Apply adjoint)
    : rows_(rows), cols_(cols), forward_(std::move(forward)), adjoint_(std::move(adjoint)) {
  require(rows >= 1 && cols >= 1, "LinearOperator: dimensions must be positive");
  require(static_cast<bool>(forward_) && static_cast<bool>(adjoint_),
          "LinearOperator: forward and adjoint maps are required");
}

VectorXd LinearOperator::forward(const VectorXd& x) const {
  require(x.size() == cols_, "forward: expected a vector of length " + std::to_string(cols_) +
                                 ", got " + std::to_string(x.size()));
  VectorXd y = forward_(x);
  require(y.size() == rows_, "forward: operator returned a vector of wrong length");
  return y;
}

VectorXd LinearOperator::adjoint(const VectorXd& y) const {
  require(y.size() == rows_, "adjoint: expected a vector of length " + std::to_string(rows_) +
                                 ", got " + std::to_string(y.size()));
  VectorXd x = adjoint_(y);
  require(x.size() == cols_, "adjoint: operator returned a vector of wrong length");
  return x;
}

MatrixXd LinearOperator::to_dense() const {
  if (dense_) return *dense_;
  if (sparse_) return MatrixXd(*sparse_);
  MatrixXd M(rows_, cols_);
  VectorXd unit = VectorXd::Zero(cols_);
  for (Index j = 0; j < cols_; ++j) {
    unit(j) = 1.0;
    M.col(j) = forward(unit);
    unit(j) = 0.0;
  }
  return M;
}

LinearOperator make_dense_operator(MatrixXd matrix) {
  require(matrix.rows() >= 1 && matrix.cols() >= 1,
          "make_dense_operator: matrix must be at least 1x1");
  require(matrix.allFinite(), "make_dense_operator: matrix has non-finite entries");
  auto shared = std::make_shared<const MatrixXd>(std::move(matrix));
  LinearOperator op(
      shared->rows(), shared->cols(),
      [shared](const VectorXd& x) -> VectorXd { return *shared * x; },
      [shared](const VectorXd& y) -> VectorXd { return shared->transpose() * y; });
  op.dense_ = shared;
  return op;
}

LinearOperator make_sparse_operator(SparseMatrix matrix) {
  require(matrix.rows() >= 1 && matrix.cols() >= 1,
          "make_sparse_operator: matrix must be at least 1x1");
  matrix.makeCompressed();
  auto shared = std::make_shared<const SparseMatrix>(std::move(matrix));
  LinearOperator op(
      shared->rows(), shared->cols(),
      [shared](const VectorXd& x) -> VectorXd { return *shared * x; },
      [shared](const VectorXd& y) -> VectorXd { return shared->transpose() * y; });
  op.sparse_ = shared;
  return op;
}

double InverseProblem::noise_variance() const {
  return e.size() == 0 ? 0.0 : e.squaredNorm() / static_cast<double>(e.size());
}

NoisyData add_noise(const VectorXd& b_exact, double noise_level, std::uint64_t seed) {
  require(std::isfinite(noise_level) && noise_level >= 0.0,
          "add_noise: noise level must be a finite nonnegative number");
  NoisyData out{b_exact, VectorXd::Zero(b_exact.size())};
  if (noise_level == 0.0) return out;

  const double data_norm = b_exact.norm();
  if (data_norm == 0.0) fail(ErrorCode::degenerate_data, "add_noise: exact data is zero");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  VectorXd g(b_exact.size());
  for (Index i = 0; i < g.size(); ++i) g(i) = normal(rng);
  const double g_norm = g.norm();
  if (g_norm == 0.0) fail(ErrorCode::numerical, "add_noise: zero noise direction drawn");

  out.e = (noise_level * data_norm / g_norm) * g;
  out.b = b_exact + out.e;
  return out;
}

namespace {

void attach_data(InverseProblem& p, double noise_level, std::uint64_t seed) {
  p.b_exact = p.op.forward(p.x_true);
  NoisyData noisy = add_noise(p.b_exact, noise_level, seed);
  p.b = std::move(noisy.b);
  p.e = std::move(noisy.e);
  p.noise_level = noise_level;
  p.seed = seed;
}

}  // namespace

InverseProblem make_gravity_problem(Index n, double depth, double noise_level,
                                    std::uint64_t seed) {
  require(n >= 2, "make_gravity_problem: n must be at least 2");
  require(std::isfinite(depth) && depth > 0.0, "make_gravity_problem: depth must be positive");

  const double h = 1.0 / static_cast<double>(n);
  MatrixXd A(n, n);
  VectorXd x_true(n);
  for (Index i = 0; i < n; ++i) {
    const double s = (static_cast<double>(i) + 0.5) * h;
    for (Index j = 0; j < n; ++j) {
      const double t = (static_cast<double>(j) + 0.5) * h;
      const double r2 = depth * depth + (s - t) * (s - t);
      A(i, j) = h * depth / (r2 * std::sqrt(r2));
    }
    x_true(i) = std::sin(std::numbers::pi * s) + 0.5 * std::sin(2.0 * std::numbers::pi * s);
  }

  InverseProblem p{make_dense_operator(std::move(A)), std::move(x_true), {}, {}, {}, 0.0, 0, {}, {}};
  attach_data(p, noise_level, seed);
  return p;
}

TomoGeometry TomoGeometry::with_defaults(Index grid) {
  TomoGeometry g;
  g.grid = grid;
  g.n_angles = grid;
  g.n_detectors = static_cast<Index>(std::ceil(std::numbers::sqrt2 * static_cast<double>(grid)));
  return g;
}

std::vector<RaySegment> trace_ray(Index grid, Eigen::Vector2d origin, Eigen::Vector2d direction) {
  require(grid >= 1, "trace_ray: grid must be positive");
  const double speed = direction.norm();
  require(speed > 0.0, "trace_ray: direction must be nonzero");
  const double size = static_cast<double>(grid);

  // Parameter interval inside the box [0, grid]^2.
  double t_enter = -std::numeric_limits<double>::infinity();
  double t_exit = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 2; ++axis) {
    if (direction(axis) == 0.0) {
      if (origin(axis) < 0.0 || origin(axis) > size) return {};
      continue;
    }
    double t0 = (0.0 - origin(axis)) / direction(axis);
    double t1 = (size - origin(axis)) / direction(axis);
    if (t0 > t1) std::swap(t0, t1);
    t_enter = std::max(t_enter, t0);
    t_exit = std::min(t_exit, t1);
  }
  if (!(t_exit > t_enter)) return {};

  std::vector<double> crossings{t_enter, t_exit};
  for (int axis = 0; axis < 2; ++axis) {
    if (direction(axis) == 0.0) continue;
    for (Index line = 0; line <= grid; ++line) {
      const double t = (static_cast<double>(line) - origin(axis)) / direction(axis);
      if (t > t_enter && t < t_exit) crossings.push_back(t);
    }
  }
  std::sort(crossings.begin(), crossings.end());

  constexpr double kMinLength = 1e-12;
  std::vector<RaySegment> segments;
  for (std::size_t s = 0; s + 1 < crossings.size(); ++s) {
    const double length = (crossings[s + 1] - crossings[s]) * speed;
    if (length <= kMinLength) continue;
    const Eigen::Vector2d mid = origin + 0.5 * (crossings[s] + crossings[s + 1]) * direction;
    const Index col = std::clamp<Index>(static_cast<Index>(std::floor(mid.x())), 0, grid - 1);
    const Index row = std::clamp<Index>(static_cast<Index>(std::floor(mid.y())), 0, grid - 1);
    const Index cell = row * grid + col;
    if (!segments.empty() && segments.back().cell == cell) {
      segments.back().length += length;
    } else {
      segments.push_back({cell, length});
    }
  }
  return segments;
}

InverseProblem make_tomo_problem(const TomoGeometry& geometry, double noise_level,
                                 std::uint64_t seed) {
  const Index N = geometry.grid;
  require(N >= 4, "make_tomo_problem: grid must be at least 4");
  require(geometry.n_angles >= 1 && geometry.n_detectors >= 1,
          "make_tomo_problem: need at least one angle and one detector");
  const double spacing = geometry.spacing.value_or(
      std::numbers::sqrt2 * static_cast<double>(N) / static_cast<double>(geometry.n_detectors));
  require(spacing > 0.0, "make_tomo_problem: detector spacing must be positive");

  const Index m = geometry.n_angles * geometry.n_detectors;
  const Eigen::Vector2d center(0.5 * static_cast<double>(N), 0.5 * static_cast<double>(N));
  std::vector<Eigen::Triplet<double>> entries;
  for (Index a = 0; a < geometry.n_angles; ++a) {
    const double theta =
        std::numbers::pi * static_cast<double>(a) / static_cast<double>(geometry.n_angles);
    const Eigen::Vector2d dir(std::cos(theta), std::sin(theta));
    const Eigen::Vector2d normal(-dir.y(), dir.x());
    for (Index d = 0; d < geometry.n_detectors; ++d) {
      const double offset =
          (static_cast<double>(d) + 0.5 - 0.5 * static_cast<double>(geometry.n_detectors)) *
          spacing;
      const Index row = a * geometry.n_detectors + d;
      for (const RaySegment& seg : trace_ray(N, center + offset * normal, dir)) {
        entries.emplace_back(row, seg.cell, seg.length);
      }
    }
  }
  SparseMatrix A(m, N * N);
  A.setFromTriplets(entries.begin(), entries.end());

  const double radius = 0.35 * static_cast<double>(N);
  VectorXd x_true = VectorXd::Zero(N * N);
  for (Index r = 0; r < N; ++r) {
    for (Index c = 0; c < N; ++c) {
      const double dx = static_cast<double>(c) + 0.5 - center.x();
      const double dy = static_cast<double>(r) + 0.5 - center.y();
      if (dx * dx + dy * dy <= radius * radius) x_true(r * N + c) = 1.0;
    }
  }

  InverseProblem p{make_sparse_operator(std::move(A)), std::move(x_true), {}, {}, {}, 0.0, 0, {}, {}};
  p.image_shape = std::make_pair(N, N);
  p.data_shape = std::make_pair(geometry.n_angles, geometry.n_detectors);
  attach_data(p, noise_level, seed);
  return p;
}

}  // namespace lslu
