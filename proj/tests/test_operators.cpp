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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "lslu/error.hpp"
#include "lslu/operators.hpp"
#include "support/oracles.hpp"

namespace lslu {
namespace {

TEST(Gravity, SmallestGridEntry) {
  const InverseProblem p = make_gravity_problem(2, 0.25, 0.0, 0);
  const MatrixXd A = p.op.to_dense();
  EXPECT_NEAR(A(0, 0), 8.0, 1e-12);
}

TEST(Gravity, MatchesKernelAndTruth) {
  const Index n = 16;
  const InverseProblem p = make_gravity_problem(n, 0.25, 0.0, 3);
  const MatrixXd A = p.op.to_dense();
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      EXPECT_NEAR(A(i, j), oracle::gravity_entry(n, 0.25, i, j), 1e-12 * std::abs(A(i, j)));
    }
    const double t = (i + 0.5) / n;
    EXPECT_NEAR(p.x_true(i),
                std::sin(std::numbers::pi * t) + 0.5 * std::sin(2 * std::numbers::pi * t), 1e-14);
  }
  EXPECT_EQ(p.b, p.b_exact);
  EXPECT_EQ(p.e.norm(), 0.0);
  EXPECT_FALSE(p.image_shape.has_value());
}

TEST(Gravity, SingularValuesDecay) {
  const MatrixXd A = make_gravity_problem(32, 0.25, 0.0, 0).op.to_dense();
  const VectorXd s = Eigen::JacobiSVD<MatrixXd>(A).singularValues();
  for (Index i = 1; i < s.size(); ++i) EXPECT_LE(s(i), s(i - 1));
  EXPECT_LT(s(s.size() - 1) / s(0), 1e-8);
}

TEST(Gravity, RejectsBadArguments) {
  EXPECT_THROW(make_gravity_problem(1, 0.25, 0.0, 0), Error);
  EXPECT_THROW(make_gravity_problem(8, 0.0, 0.0, 0), Error);
  EXPECT_THROW(make_gravity_problem(8, 0.25, -1.0, 0), Error);
}

TEST(Noise, LevelIsExactAndSeeded) {
  const VectorXd b = oracle::random_vector(50, 11);
  const NoisyData a = add_noise(b, 1e-2, 5);
  EXPECT_NEAR(a.e.norm() / b.norm(), 1e-2, 1e-12);
  EXPECT_LE((a.b - b - a.e).norm(), 1e-15 * b.norm());
  const NoisyData again = add_noise(b, 1e-2, 5);
  EXPECT_EQ(a.e, again.e);
  const NoisyData other = add_noise(b, 1e-2, 6);
  EXPECT_GT((a.e - other.e).norm(), 0.0);
}

TEST(Noise, ZeroDataIsDegenerate) {
  try {
    add_noise(VectorXd::Zero(5), 1e-2, 0);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::degenerate_data);
  }
  EXPECT_EQ(add_noise(VectorXd::Zero(5), 0.0, 0).e.norm(), 0.0);
}

TEST(Operator, DenseAdjointConsistency) {
  const MatrixXd A = oracle::random_matrix(7, 4, 1);
  const LinearOperator op = make_dense_operator(A);
  const VectorXd x = oracle::random_vector(4, 2);
  const VectorXd y = oracle::random_vector(7, 3);
  EXPECT_NEAR(op.forward(x).dot(y), x.dot(op.adjoint(y)), 1e-12);
  EXPECT_NEAR((op.forward(x) - A * x).norm(), 0.0, 1e-14);
  EXPECT_NE(op.dense(), nullptr);
  EXPECT_EQ(op.sparse(), nullptr);
}

TEST(Operator, RejectsWrongLengthsAndNonFinite) {
  const LinearOperator op = make_dense_operator(MatrixXd::Identity(3, 2));
  try {
    op.forward(VectorXd::Zero(3));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_input);
  }
  EXPECT_THROW(op.adjoint(VectorXd::Zero(2)), Error);
  MatrixXd bad = MatrixXd::Identity(2, 2);
  bad(0, 1) = std::nan("");
  EXPECT_THROW(make_dense_operator(bad), Error);
}

TEST(Operator, CustomCallbacks) {
  const LinearOperator op(
      2, 3, [](const VectorXd& x) { return VectorXd(x.head(2)); },
      [](const VectorXd& y) {
        VectorXd x = VectorXd::Zero(3);
        x.head(2) = y;
        return x;
      });
  EXPECT_EQ(op.rows(), 2);
  EXPECT_EQ(op.cols(), 3);
  EXPECT_EQ(op.to_dense(), MatrixXd::Identity(2, 3));
}

TEST(Tomo, RayThroughRowHasUnitLengths) {
  const auto segs = trace_ray(4, Eigen::Vector2d(-1.0, 2.5), Eigen::Vector2d(1.0, 0.0));
  ASSERT_EQ(segs.size(), 4u);
  for (Index c = 0; c < 4; ++c) {
    EXPECT_EQ(segs[static_cast<std::size_t>(c)].cell, 2 * 4 + c);
    EXPECT_NEAR(segs[static_cast<std::size_t>(c)].length, 1.0, 1e-14);
  }
}

TEST(Tomo, DiagonalRayLength) {
  const auto segs = trace_ray(3, Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(1.0, 1.0));
  double total = 0.0;
  for (const auto& s : segs) total += s.length;
  EXPECT_NEAR(total, 3.0 * std::sqrt(2.0), 1e-12);
  ASSERT_EQ(segs.size(), 3u);
  EXPECT_EQ(segs[0].cell, 0);
  EXPECT_EQ(segs[1].cell, 4);
  EXPECT_EQ(segs[2].cell, 8);
}

TEST(Tomo, MissesOutsideImage) {
  EXPECT_TRUE(trace_ray(4, Eigen::Vector2d(-1.0, 5.0), Eigen::Vector2d(1.0, 0.0)).empty());
}

TEST(Tomo, ShapesAdjointAndChords) {
  const InverseProblem p = make_tomo_problem(TomoGeometry::with_defaults(8), 1e-2, 4);
  ASSERT_TRUE(p.image_shape && p.data_shape);
  EXPECT_EQ(p.image_shape->first, 8);
  EXPECT_EQ(p.data_shape->first, 8);
  EXPECT_EQ(p.data_shape->second, 12);
  EXPECT_EQ(p.op.rows(), 8 * 12);
  EXPECT_EQ(p.op.cols(), 64);
  ASSERT_NE(p.op.sparse(), nullptr);

  const VectorXd x = oracle::random_vector(64, 1);
  const VectorXd y = oracle::random_vector(96, 2);
  EXPECT_NEAR(p.op.forward(x).dot(y), x.dot(p.op.adjoint(y)), 1e-10);

  // Every ray sum of the all-ones image is a chord of the square, so at
  // most the diagonal.
  const VectorXd chords = p.op.forward(VectorXd::Ones(64));
  EXPECT_LE(chords.maxCoeff(), 8.0 * std::sqrt(2.0) + 1e-12);
  EXPECT_GE(chords.minCoeff(), 0.0);
  // The 0-degree rays through the middle of the image cross it fully.
  EXPECT_NEAR(chords.head(12).maxCoeff(), 8.0, 1e-12);
  EXPECT_NEAR(p.e.norm() / p.b_exact.norm(), 1e-2, 1e-12);
}

TEST(Tomo, PhantomIsCenteredDisk) {
  const InverseProblem p = make_tomo_problem(TomoGeometry::with_defaults(16), 0.0, 0);
  EXPECT_EQ(p.x_true(8 * 16 + 8), 1.0);
  EXPECT_EQ(p.x_true(0), 0.0);
  const double area = p.x_true.sum();
  EXPECT_NEAR(area / (std::numbers::pi * 0.35 * 0.35 * 256), 1.0, 0.1);
}

TEST(Problem, NoiseVariance) {
  const InverseProblem p = make_gravity_problem(20, 0.25, 1e-2, 9);
  EXPECT_NEAR(p.noise_variance(), p.e.squaredNorm() / 20.0, 1e-18);
}

}  // namespace
}  // namespace lslu
