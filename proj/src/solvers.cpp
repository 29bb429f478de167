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

#include "lslu/solvers.hpp"

#include <cmath>
#include <limits>
#include <type_traits>

#include "lslu/error.hpp"
#include "lslu/kernels.hpp"

namespace lslu {

const char* to_string(Method m) noexcept {
  switch (m) {
    case Method::lslu: return "lslu";
    case Method::hybrid_lslu: return "hybrid_lslu";
    case Method::lsqr: return "lsqr";
    case Method::hybrid_lsqr: return "hybrid_lsqr";
  }
  return "unknown";
}

const char* to_string(StopReason r) noexcept {
  switch (r) {
    case StopReason::ghat_tol: return "ghat_tol";
    case StopReason::maxiter: return "maxiter";
    case StopReason::breakdown: return "breakdown";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::lslu, Method::hybrid_lslu, Method::lsqr, Method::hybrid_lsqr}) {
    if (name == to_string(m)) return m;
  }
  return std::nullopt;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct HessenbergProcess {
  HessenbergState state;

  bool stopped() const { return state.breakdown() != Breakdown::none; }
  void step(const LinearOperator& op) { hess_step(state, op); }
  Index k() const { return state.k(); }
  MatrixXd projected() const { return state.H(); }
  double beta() const { return state.beta(); }
  VectorXd basis_column(Index j) const { return state.L().col(j); }
  MatrixXd basis() const { return state.L(); }
};

struct BidiagProcess {
  BidiagState state;

  bool stopped() const { return state.status() != BidiagStatus::running; }
  void step(const LinearOperator& op) { gk_step(state, op); }
  Index k() const { return state.k(); }
  MatrixXd projected() const { return state.B(); }
  double beta() const { return state.beta1(); }
  VectorXd basis_column(Index j) const { return state.V().col(j); }
  MatrixXd basis() const { return state.V(); }
};

// Gram data for the optimal rule, grown by one basis column per iteration.
class ErrorModelBuilder {
 public:
  ErrorModelBuilder(const VectorXd& x_true, const VectorXd& x0) : target_(x_true - x0) {
    model_.offset_sq = kernels::dot(target_, target_);
  }

  template <class Process>
  void extend(const Process& process) {
    const Index k = process.k();
    const Index old = model_.cross.size();
    MatrixXd gram = MatrixXd::Zero(k, k);
    gram.topLeftCorner(old, old) = model_.gram;
    VectorXd cross(k);
    cross.head(old) = model_.cross;
    for (Index c = old; c < k; ++c) {
      const VectorXd q = process.basis_column(c);
      for (Index j = 0; j <= c; ++j) {
        const double v = j == c ? kernels::dot(q, q) : kernels::dot(q, process.basis_column(j));
        gram(c, j) = v;
        gram(j, c) = v;
      }
      cross(c) = kernels::dot(q, target_);
    }
    model_.gram = std::move(gram);
    model_.cross = std::move(cross);
  }

  const SolutionErrorModel& model() const { return model_; }

 private:
  VectorXd target_;
  SolutionErrorModel model_{MatrixXd(0, 0), VectorXd(0), 0.0};
};

void validate(const LinearOperator& op, const VectorXd& b, const SolverConfig& config) {
  require(b.size() == op.rows(), "solve: b has the wrong length");
  require(b.allFinite(), "solve: b has non-finite entries");
  require(config.maxiter >= 1, "solve: maxiter must be at least 1");
  if (config.x0) require(config.x0->size() == op.cols(), "solve: x0 has the wrong length");
  if (config.x_true) {
    require(config.x_true->size() == op.cols(), "solve: x_true has the wrong length");
  }
  if (config.stop_tol) require(*config.stop_tol > 0.0, "solve: stop_tol must be positive");
}

template <class Process>
SolveResult drive(Process process, Method method, const LinearOperator& op, const VectorXd& b,
                  const SolverConfig& config, bool hybrid) {
  SolveResult r;
  r.method = method;
  r.x0 = config.x0.value_or(VectorXd::Zero(op.cols()));
  r.beta = process.beta();

  const Index m = op.rows();
  const Index n = op.cols();
  const LambdaRule rule = hybrid ? config.lambda_rule : LambdaRule::fixed(0.0);
  std::optional<ErrorModelBuilder> truth;
  if (rule.kind == LambdaKind::optimal) {
    require(config.x_true.has_value(), "solve: the optimal lambda rule needs x_true");
    truth.emplace(*config.x_true, r.x0);
  }
  const double truth_norm =
      config.x_true && !config.pure ? kernels::norm(*config.x_true) : kNaN;

  r.stop_reason = StopReason::maxiter;
  bool stopped_early = false;
  if (process.stopped()) {
    r.stop_reason = StopReason::breakdown;
    stopped_early = true;
  }
  while (!stopped_early && process.k() < config.maxiter) {
    const Index before = process.k();
    process.step(op);
    if (process.k() == before) {
      r.stop_reason = StopReason::breakdown;
      break;
    }
    const Index k = process.k();
    if (truth) truth->extend(process);

    const ProjectedSvd svd = svd_small(process.projected());
    const double lambda =
        select_lambda(rule, svd, r.beta, m, truth ? &truth->model() : nullptr);
    VectorXd y = lambda == 0.0 ? least_squares_projected(svd, r.beta)
                               : tikhonov_projected(svd, r.beta, lambda);
    r.lambda.push_back(lambda);
    r.ghat.push_back(k < m ? ghat(svd, r.beta, lambda, m, n) : kNaN);
    r.y.push_back(std::move(y));
    r.k_reached = k;

    if (config.pure) {
      r.residual_norm.push_back(kNaN);
      r.relative_error.push_back(kNaN);
    } else {
      const VectorXd x = r.x0 + process.basis() * r.y.back();
      r.residual_norm.push_back(kernels::norm(b - op.forward(x)));
      r.relative_error.push_back(
          config.x_true ? kernels::norm(x - *config.x_true) / truth_norm : kNaN);
    }

    if (hybrid && config.stop_tol && r.ghat.size() >= 2 && std::isfinite(r.ghat.front()) &&
        std::isfinite(r.ghat.back()) && std::isfinite(r.ghat[r.ghat.size() - 2])) {
      if (stop_check(r.ghat, *config.stop_tol) == StopCheck::converged) {
        r.stop_reason = StopReason::ghat_tol;
        r.k_stop = k - 1;
        stopped_early = true;
        break;
      }
    }
    if (process.stopped()) {
      r.stop_reason = StopReason::breakdown;
      break;
    }
  }
  if (!stopped_early) r.k_stop = r.k_reached;

  if constexpr (std::is_same_v<Process, HessenbergProcess>) {
    r.hessenberg = std::move(process.state);
  } else {
    r.bidiag = std::move(process.state);
  }
  r.x_final = r.solution_at(r.k_stop);
  return r;
}

VectorXd start_vector(const LinearOperator& op, const SolverConfig& config) {
  return config.x0.value_or(VectorXd::Zero(op.cols()));
}

SolveResult run_hessenberg(Method method, const LinearOperator& op, const VectorXd& b,
                           const SolverConfig& config, bool hybrid) {
  validate(op, b, config);
  HessenbergProcess p{hess_init(op, b, start_vector(op, config), config.pivot)};
  return drive(std::move(p), method, op, b, config, hybrid);
}

SolveResult run_bidiag(Method method, const LinearOperator& op, const VectorXd& b,
                       const SolverConfig& config, bool hybrid) {
  validate(op, b, config);
  BidiagProcess p{gk_init(op, b, start_vector(op, config), config.reorth)};
  return drive(std::move(p), method, op, b, config, hybrid);
}

}  // namespace

VectorXd SolveResult::solution_at(Index k) const {
  require(k >= 0 && k <= k_reached, "solution_at: k outside [0, k_reached]");
  if (k == 0) return x0;
  const VectorXd& yk = y[static_cast<std::size_t>(k - 1)];
  if (hessenberg) return x0 + hessenberg->L().leftCols(k) * yk;
  if (bidiag) return x0 + bidiag->V().leftCols(k) * yk;
  fail(ErrorCode::invalid_input, "solution_at: result has no basis");
}

double SolveResult::final_lambda() const {
  return k_stop >= 1 ? lambda[static_cast<std::size_t>(k_stop - 1)] : 0.0;
}

double SolveResult::final_relative_error() const {
  return k_stop >= 1 ? relative_error[static_cast<std::size_t>(k_stop - 1)] : kNaN;
}

SolveResult run_lslu(const LinearOperator& op, const VectorXd& b, const SolverConfig& config) {
  return run_hessenberg(Method::lslu, op, b, config, false);
}

SolveResult run_hybrid_lslu(const LinearOperator& op, const VectorXd& b,
                            const SolverConfig& config) {
  return run_hessenberg(Method::hybrid_lslu, op, b, config, true);
}

SolveResult run_lsqr(const LinearOperator& op, const VectorXd& b, const SolverConfig& config) {
  return run_bidiag(Method::lsqr, op, b, config, false);
}

SolveResult run_hybrid_lsqr(const LinearOperator& op, const VectorXd& b,
                            const SolverConfig& config) {
  return run_bidiag(Method::hybrid_lsqr, op, b, config, true);
}

SolveResult solve(const LinearOperator& op, const VectorXd& b, const SolverConfig& config) {
  switch (config.method) {
    case Method::lslu: return run_lslu(op, b, config);
    case Method::hybrid_lslu: return run_hybrid_lslu(op, b, config);
    case Method::lsqr: return run_lsqr(op, b, config);
    case Method::hybrid_lsqr: return run_hybrid_lsqr(op, b, config);
  }
  fail(ErrorCode::invalid_input, "solve: unknown method");
}

void attach_norm_histories(SolveResult& result, const LinearOperator& op, const VectorXd& b,
                           const VectorXd* x_true) {
  require(b.size() == op.rows(), "attach_norm_histories: b has the wrong length");
  const double truth_norm = x_true ? x_true->norm() : kNaN;
  const auto count = static_cast<std::size_t>(result.k_reached);
  result.residual_norm.assign(count, kNaN);
  result.relative_error.assign(count, kNaN);
  for (Index k = 1; k <= result.k_reached; ++k) {
    const VectorXd x = result.solution_at(k);
    const auto i = static_cast<std::size_t>(k - 1);
    result.residual_norm[i] = (b - op.forward(x)).norm();
    if (x_true) result.relative_error[i] = (x - *x_true).norm() / truth_norm;
  }
}

}  // namespace lslu
