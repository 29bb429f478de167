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

#include <Eigen/Core>

/// Full-length vector reductions.
///
/// Every inner product or Euclidean norm of a length-m or length-n vector
/// taken by the solvers goes through these functions, which bump a
/// thread-local counter. The Hessenberg-based methods are expected to leave
/// the counter untouched when history reporting is disabled; tests check it.
namespace lslu::kernels {

struct ReductionCounters {
  std::uint64_t inner_products = 0;   // dot() and norm() calls
  std::uint64_t reduced_entries = 0;  // total vector length reduced
};

ReductionCounters& reduction_counters() noexcept;
void reset_reduction_counters() noexcept;

double dot(const Eigen::Ref<const Eigen::VectorXd>& a,
           const Eigen::Ref<const Eigen::VectorXd>& b);
double norm(const Eigen::Ref<const Eigen::VectorXd>& a);

}  // namespace lslu::kernels
