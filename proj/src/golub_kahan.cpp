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

#include "lslu/golub_kahan.hpp"

#include "lslu/error.hpp"
#include "lslu/hessenberg.hpp"
#include "lslu/kernels.hpp"

namespace lslu {

const char* to_string(BidiagStatus s) noexcept {
  switch (s) {
    case BidiagStatus::running: return "running";
    case BidiagStatus::exact_solution: return "exact_solution";
    case BidiagStatus::rank_deficient: return "rank_deficient";
  }
  return "unknown";
}

namespace {

// Two passes of classical Gram-Schmidt against the leading `count` columns.
template <class Basis>
void reorthogonalize(VectorXd& v, const Basis& basis, Index count) {
  for (int pass = 0; pass < 2; ++pass) {
    for (Index j = 0; j < count; ++j) {
      const VectorXd column = basis.col(j);
      v.noalias() -= kernels::dot(column, v) * column;
    }
  }
}

}  // namespace

BidiagState gk_init(const LinearOperator& op, const VectorXd& b, const VectorXd& x0,
                    bool reorth) {
  require(b.size() == op.rows(), "gk_init: b has the wrong length");
  require(x0.size() == op.cols(), "gk_init: x0 has the wrong length");
  BidiagState s;
  s.m_ = op.rows();
  s.n_ = op.cols();
  s.reorth_ = reorth;
  s.x0_ = x0;
  s.u_.resize(s.m_, 0);
  s.v_.resize(s.n_, 0);
  s.b_.resize(1, 0);

  const VectorXd r0 = b - op.forward(x0);
  s.beta1_ = kernels::norm(r0);
  if (!(s.beta1_ > kBreakdownTol * kernels::norm(b))) {
    s.beta1_ = 0.0;
    s.status_ = BidiagStatus::exact_solution;
    return s;
  }
  s.u_.resize(s.m_, 1);
  s.u_.col(0) = r0 / s.beta1_;
  return s;
}

void gk_step(BidiagState& s, const LinearOperator& op) {
  require(s.status_ == BidiagStatus::running, "gk_step: the process has already stopped");
  const Index c = s.k_;

  VectorXd p = op.adjoint(s.u_.col(c));
  const double p_scale = kernels::norm(p);
  if (c > 0) p.noalias() -= s.b_(c, c - 1) * s.v_.col(c - 1);
  if (s.reorth_) reorthogonalize(p, s.v_, c);
  const double alpha = kernels::norm(p);
  if (!(alpha > kBreakdownTol * p_scale)) {
    s.status_ = BidiagStatus::rank_deficient;
    return;
  }
  s.v_.resize(s.n_, c + 1);
  s.v_.col(c) = p / alpha;
  s.b_.resize(c + 2, c + 1);
  s.b_(c, c) = alpha;

  VectorXd w = op.forward(s.v_.col(c));
  const double w_scale = kernels::norm(w);
  w.noalias() -= alpha * s.u_.col(c);
  if (s.reorth_) reorthogonalize(w, s.u_, c + 1);
  const double beta = kernels::norm(w);
  s.k_ = c + 1;
  if (!(beta > kBreakdownTol * w_scale) || s.u_.cols() >= s.m_) {
    s.status_ = BidiagStatus::exact_solution;
    return;
  }
  s.b_(c + 1, c) = beta;
  s.u_.resize(s.m_, c + 2);
  s.u_.col(c + 1) = w / beta;
}

BidiagState gk_run(const LinearOperator& op, const VectorXd& b, const VectorXd& x0,
                   Index maxiter, bool reorth) {
  require(maxiter >= 1, "gk_run: maxiter must be at least 1");
  BidiagState s = gk_init(op, b, x0, reorth);
  while (s.status() == BidiagStatus::running && s.k() < maxiter) gk_step(s, op);
  return s;
}

}  // namespace lslu
