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

#include <algorithm>

#include <Eigen/Core>

namespace lslu::detail {

// Dense column-major matrix with a logical extent inside a larger buffer.
// Capacity doubles on growth; entries exposed by growing are zero.
class GrowingMatrix {
 public:
  using Index = Eigen::Index;

  GrowingMatrix() = default;
  GrowingMatrix(Index rows, Index cols) { resize(rows, cols); }

  void resize(Index rows, Index cols) {
    if (rows > data_.rows() || cols > data_.cols()) {
      const Index cap_rows =
          rows > data_.rows() ? std::max<Index>(2 * data_.rows(), rows) : data_.rows();
      const Index cap_cols =
          cols > data_.cols() ? std::max<Index>(2 * data_.cols(), cols) : data_.cols();
      Eigen::MatrixXd grown = Eigen::MatrixXd::Zero(cap_rows, cap_cols);
      grown.topLeftCorner(rows_, cols_) = data_.topLeftCorner(rows_, cols_);
      data_.swap(grown);
    }
    // Clear anything outside the old extent that becomes visible.
    if (rows > rows_) data_.block(rows_, 0, rows - rows_, cols).setZero();
    if (cols > cols_) data_.block(0, cols_, rows, cols - cols_).setZero();
    rows_ = rows;
    cols_ = cols;
  }

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }

  double& operator()(Index i, Index j) { return data_(i, j); }
  double operator()(Index i, Index j) const { return data_(i, j); }

  auto view() const { return data_.topLeftCorner(rows_, cols_); }
  auto view() { return data_.topLeftCorner(rows_, cols_); }
  auto col(Index j) const { return data_.col(j).head(rows_); }
  auto col(Index j) { return data_.col(j).head(rows_); }

 private:
  Eigen::MatrixXd data_;
  Index rows_ = 0;
  Index cols_ = 0;
};

}  // namespace lslu::detail
