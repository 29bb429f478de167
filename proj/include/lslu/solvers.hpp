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

#include <optional>
#include <string_view>
#include <vector>

#include "lslu/golub_kahan.hpp"
#include "lslu/hessenberg.hpp"
#include "lslu/projected.hpp"

namespace lslu {

enum class Method { lslu, hybrid_lslu, lsqr, hybrid_lsqr };
enum class StopReason { ghat_tol, maxiter, breakdown };

const char* to_string(Method m) noexcept;
const char* to_string(StopReason r) noexcept;
std::optional<Method> parse_method(std::string_view name);

struct SolverConfig {
  Method method = Method::hybrid_lslu;
  Index maxiter = 50;
  std::optional<VectorXd> x0;       // zero when unset
  PivotStrategy pivot;              // Hessenberg methods only
  LambdaRule lambda_rule;           // hybrid methods only
  std::optional<double> stop_tol;   // hybrid methods only; unset disables
  std::optional<VectorXd> x_true;   // enables error histories
  bool reorth = true;               // Golub-Kahan methods only
  /// Skip every full-length norm during the iteration. Residual and error
  /// histories are then NaN until attach_norm_histories is called.
  bool pure = false;
};

struct SolveResult {
  Method method = Method::hybrid_lslu;
  VectorXd x0;
  VectorXd x_final;
  Index k_reached = 0;
  Index k_stop = 0;
  StopReason stop_reason = StopReason::maxiter;
  /// beta for the Hessenberg methods (pivoted r0 entry), beta1 otherwise.
  double beta = 0.0;

  // One entry per iteration 1..k_reached.
  std::vector<double> residual_norm;
  std::vector<double> relative_error;
  std::vector<double> lambda;
  std::vector<double> ghat;
  std::vector<VectorXd> y;

  std::optional<HessenbergState> hessenberg;
  std::optional<BidiagState> bidiag;

  /// x_k = x0 + Q_k y_k for k in [0, k_reached].
  VectorXd solution_at(Index k) const;
  /// Lambda at the stopping iteration (0 when none was selected).
  double final_lambda() const;
  /// Relative error at the stopping iteration, NaN if untracked.
  double final_relative_error() const;
};

SolveResult run_lslu(const LinearOperator& op, const VectorXd& b, const SolverConfig& config);
SolveResult run_hybrid_lslu(const LinearOperator& op, const VectorXd& b,
                            const SolverConfig& config);
SolveResult run_lsqr(const LinearOperator& op, const VectorXd& b, const SolverConfig& config);
SolveResult run_hybrid_lsqr(const LinearOperator& op, const VectorXd& b,
                            const SolverConfig& config);

/// Dispatches on config.method.
SolveResult solve(const LinearOperator& op, const VectorXd& b, const SolverConfig& config);

/// Fills residual and error histories after a pure run.
void attach_norm_histories(SolveResult& result, const LinearOperator& op, const VectorXd& b,
                           const VectorXd* x_true);

}  // namespace lslu
