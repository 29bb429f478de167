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

#include "lslu/kernels.hpp"

#include "lslu/error.hpp"

namespace lslu::kernels {

namespace {
thread_local ReductionCounters counters;
}  // namespace

ReductionCounters& reduction_counters() noexcept { return counters; }

void reset_reduction_counters() noexcept { counters = ReductionCounters{}; }

double dot(const Eigen::Ref<const Eigen::VectorXd>& a,
           const Eigen::Ref<const Eigen::VectorXd>& b) {
  require(a.size() == b.size(), "dot: length mismatch");
  ++counters.inner_products;
  counters.reduced_entries += static_cast<std::uint64_t>(a.size());
  return a.dot(b);
}

double norm(const Eigen::Ref<const Eigen::VectorXd>& a) {
  ++counters.inner_products;
  counters.reduced_entries += static_cast<std::uint64_t>(a.size());
  return a.norm();
}

}  // namespace lslu::kernels
