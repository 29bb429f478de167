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

#include "lslu/hessenberg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>
#include <utility>

#include "lslu/error.hpp"

namespace lslu {

const char* to_string(Breakdown b) noexcept {
  switch (b) {
    case Breakdown::none: return "none";
    case Breakdown::exact_solution: return "exact_solution";
    case Breakdown::rank_deficient: return "rank_deficient";
    case Breakdown::zero_pivot: return "zero_pivot";
  }
  return "unknown";
}

namespace {

enum class PivotKindResult { ok, vanished, zero_pivot };

struct PivotChoice {
  PivotKindResult result;
  Index pos;
};

// Positions first..first+window-1, `count` of them drawn uniformly without
// replacement (Floyd's algorithm), in increasing order.
std::vector<Index> sample_positions(Index first, Index window, Index count,
                                    std::mt19937_64& rng) {
  std::vector<Index> positions;
  if (count >= window) {
    positions.resize(static_cast<std::size_t>(window));
    std::iota(positions.begin(), positions.end(), first);
    return positions;
  }
  std::unordered_set<Index> chosen;
  chosen.reserve(static_cast<std::size_t>(count) * 2);
  for (Index j = window - count; j < window; ++j) {
    const Index pick = std::uniform_int_distribution<Index>(0, j)(rng);
    chosen.insert(chosen.count(pick) ? j : pick);
  }
  positions.assign(chosen.begin(), chosen.end());
  std::sort(positions.begin(), positions.end());
  for (Index& p : positions) p += first;
  return positions;
}

// Largest |v(perm[pos])| over the window, smallest position on ties. The
// divisor counts as zero when it does not exceed kBreakdownTol times the
// infinity norm of `reference` (the vector before elimination).
PivotChoice search_window(const VectorXd& v, const VectorXd& reference,
                          const std::vector<Index>& perm, Index first) {
  const Index size = static_cast<Index>(perm.size());
  const double scale = reference.size() ? reference.cwiseAbs().maxCoeff() : 0.0;
  Index best = first;
  double best_abs = std::abs(v(perm[first]));
  for (Index pos = first + 1; pos < size; ++pos) {
    const double a = std::abs(v(perm[pos]));
    if (a > best_abs) {
      best = pos;
      best_abs = a;
    }
  }
  if (!(best_abs > kBreakdownTol * scale)) return {PivotKindResult::vanished, -1};
  return {PivotKindResult::ok, best};
}

PivotChoice choose_pivot(const VectorXd& v, const VectorXd& reference,
                         const std::vector<Index>& perm, Index first,
                         const PivotStrategy& strategy, std::mt19937_64& rng) {
  const Index size = static_cast<Index>(perm.size());
  if (first >= size) return {PivotKindResult::vanished, -1};

  switch (strategy.kind) {
    case PivotKind::none: {
      const double scale = reference.cwiseAbs().maxCoeff();
      if (std::abs(v(perm[first])) > kBreakdownTol * scale) return {PivotKindResult::ok, first};
      const PivotChoice any = search_window(v, reference, perm, first);
      if (any.result == PivotKindResult::vanished) return any;
      return {PivotKindResult::zero_pivot, first};
    }
    case PivotKind::full:
      return search_window(v, reference, perm, first);
    case PivotKind::sampled: {
      const std::vector<Index> positions =
          sample_positions(first, size - first, strategy.sample_size, rng);
      double sample_scale = 0.0;
      double best_abs = -1.0;
      Index best = positions.front();
      for (Index pos : positions) {
        sample_scale = std::max(sample_scale, std::abs(reference(perm[pos])));
        const double a = std::abs(v(perm[pos]));
        if (a > best_abs) {
          best = pos;
          best_abs = a;
        }
      }
      if (best_abs > 0.0 && best_abs > kBreakdownTol * sample_scale) {
        return {PivotKindResult::ok, best};
      }
      // The sample saw nothing usable; decide on the whole window.
      return search_window(v, reference, perm, first);
    }
  }
  return {PivotKindResult::vanished, -1};
}

void validate(const PivotStrategy& s) {
  if (s.kind != PivotKind::sampled) return;
  require(s.sample_size >= 1, "pivot strategy: sample_size must be at least 1");
}

}  // namespace

HessenbergState hess_init(const LinearOperator& op, const VectorXd& b, const VectorXd& x0,
                          const PivotStrategy& strategy) {
  const Index m = op.rows();
  const Index n = op.cols();
  require(b.size() == m, "hess_init: b has the wrong length");
  require(x0.size() == n, "hess_init: x0 has the wrong length");
  validate(strategy);

  HessenbergState s;
  s.m_ = m;
  s.n_ = n;
  s.strategy_ = strategy;
  s.rng_.seed(strategy.seed);
  s.x0_ = x0;
  s.t_.resize(static_cast<std::size_t>(m));
  s.g_.resize(static_cast<std::size_t>(n));
  std::iota(s.t_.begin(), s.t_.end(), Index{0});
  std::iota(s.g_.begin(), s.g_.end(), Index{0});
  s.l_.resize(n, 0);
  s.d_.resize(m, 0);
  s.h_.resize(1, 0);
  s.w_.resize(0, 0);

  s.r0_ = b - op.forward(x0);
  const PivotChoice pivot = choose_pivot(s.r0_, b, s.t_, 0, strategy, s.rng_);
  if (pivot.result == PivotKindResult::vanished) {
    s.breakdown_ = Breakdown::exact_solution;
    return s;
  }
  if (pivot.result == PivotKindResult::zero_pivot) {
    fail(ErrorCode::breakdown,
         "hess_init: leading residual entry is zero; the unpivoted process cannot start "
         "(use full or sampled pivoting)");
  }
  std::swap(s.t_[0], s.t_[static_cast<std::size_t>(pivot.pos)]);
  s.beta_ = s.r0_(s.t_[0]);
  s.d_.resize(m, 1);
  s.d_.col(0) = s.r0_ / s.beta_;
  return s;
}

void hess_step(HessenbergState& s, const LinearOperator& op) {
  require(s.breakdown_ == Breakdown::none, "hess_step: the process has already stopped");
  require(op.rows() == s.m_ && op.cols() == s.n_, "hess_step: operator dimensions changed");
  const Index c = s.k_;
  const auto cu = static_cast<std::size_t>(c);

  // Solution basis: q = A^T d_c, eliminated against l_0..l_{c-1}.
  VectorXd q = op.adjoint(s.d_.col(c));
  const VectorXd q_before = q;
  s.w_.resize(c + 1, c + 1);
  for (Index j = 0; j < c; ++j) {
    const double w = q(s.g_[static_cast<std::size_t>(j)]);
    s.w_(j, c) = w;
    q.noalias() -= w * s.l_.col(j);
  }
  const PivotChoice qp = choose_pivot(q, q_before, s.g_, c, s.strategy_, s.rng_);
  if (qp.result != PivotKindResult::ok) {
    s.w_.resize(c, c);
    s.breakdown_ = qp.result == PivotKindResult::vanished ? Breakdown::rank_deficient
                                                          : Breakdown::zero_pivot;
    return;
  }
  std::swap(s.g_[cu], s.g_[static_cast<std::size_t>(qp.pos)]);
  const double w_diag = q(s.g_[cu]);
  s.w_(c, c) = w_diag;
  s.l_.resize(s.n_, c + 1);
  s.l_.col(c) = q / w_diag;

  // Residual basis: u = A l_c, eliminated against d_0..d_c.
  VectorXd u = op.forward(s.l_.col(c));
  const VectorXd u_before = u;
  s.h_.resize(c + 2, c + 1);
  for (Index j = 0; j <= c; ++j) {
    const double h = u(s.t_[static_cast<std::size_t>(j)]);
    s.h_(j, c) = h;
    u.noalias() -= h * s.d_.col(j);
  }
  const PivotChoice up = choose_pivot(u, u_before, s.t_, c + 1, s.strategy_, s.rng_);
  if (up.result == PivotKindResult::vanished) {
    // H(c+1, c) = 0: the residual lies in span(D); keep the step.
    s.k_ = c + 1;
    s.breakdown_ = Breakdown::exact_solution;
    return;
  }
  if (up.result == PivotKindResult::zero_pivot) {
    // The relation A L = D H cannot hold for this column; roll it back.
    std::swap(s.g_[cu], s.g_[static_cast<std::size_t>(qp.pos)]);
    s.l_.resize(s.n_, c);
    s.w_.resize(c, c);
    s.h_.resize(c + 1, c);
    s.breakdown_ = Breakdown::zero_pivot;
    return;
  }
  std::swap(s.t_[cu + 1], s.t_[static_cast<std::size_t>(up.pos)]);
  const double h_sub = u(s.t_[cu + 1]);
  s.h_(c + 1, c) = h_sub;
  s.d_.resize(s.m_, c + 2);
  s.d_.col(c + 1) = u / h_sub;
  s.k_ = c + 1;
}

HessenbergState hess_run(const LinearOperator& op, const VectorXd& b, const VectorXd& x0,
                         const PivotStrategy& strategy, Index maxiter) {
  require(maxiter >= 1, "hess_run: maxiter must be at least 1");
  HessenbergState state = hess_init(op, b, x0, strategy);
  while (state.breakdown() == Breakdown::none && state.k() < maxiter) hess_step(state, op);
  return state;
}

}  // namespace lslu
