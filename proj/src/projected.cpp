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

#include "lslu/projected.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "lslu/error.hpp"

namespace lslu {

namespace {

constexpr double kRankCutoff = 1e-14;

void make_column_positive(MatrixXd& M, Index j, MatrixXd* partner) {
  Index arg = 0;
  M.col(j).cwiseAbs().maxCoeff(&arg);
  if (M(arg, j) < 0.0) {
    M.col(j) *= -1.0;
    if (partner) partner->col(j) *= -1.0;
  }
}

// y = V diag(phi_i) beta ue1, phi_i = sigma_i / (sigma_i^2 + lambda^2), with
// phi_i = 0 for sigma_i <= cutoff.
VectorXd filtered_solution(const ProjectedSvd& svd, double beta, double lambda, double cutoff) {
  const Index k = svd.k();
  const double l2 = lambda * lambda;
  VectorXd coeff(k);
  for (Index i = 0; i < k; ++i) {
    const double s = svd.sigma(i);
    coeff(i) = s > cutoff ? s / (s * s + l2) * (beta * svd.ue1(i)) : 0.0;
  }
  return svd.V * coeff;
}

double filter_factor(double sigma, double lambda) {
  const double l2 = lambda * lambda;
  const double denom = sigma * sigma + l2;
  return denom > 0.0 ? l2 / denom : 1.0;
}

double weighted_trace_term(double sigma, double lambda, double omega) {
  const double s2 = sigma * sigma;
  const double l2 = lambda * lambda;
  const double denom = s2 + l2;
  return denom > 0.0 ? ((1.0 - omega) * s2 + l2) / denom : 1.0;
}

}  // namespace

ProjectedSvd svd_small(const MatrixXd& H) {
  require(H.cols() >= 1 && H.rows() == H.cols() + 1, "svd_small: expected a (k+1) x k matrix");
  require(H.allFinite(), "svd_small: non-finite entries");
  const Eigen::JacobiSVD<MatrixXd> svd(H, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) fail(ErrorCode::numerical, "svd_small: SVD did not converge");

  ProjectedSvd out{svd.matrixU(), svd.singularValues(), svd.matrixV(), {}};
  const Index k = H.cols();
  for (Index j = 0; j < k; ++j) make_column_positive(out.V, j, &out.U);
  make_column_positive(out.U, k, nullptr);
  out.ue1 = out.U.row(0).transpose();
  return out;
}

VectorXd tikhonov_projected(const ProjectedSvd& svd, double beta, double lambda) {
  require(std::isfinite(lambda) && lambda >= 0.0, "tikhonov_projected: lambda must be >= 0");
  if (lambda == 0.0 && !(svd.sigma(svd.k() - 1) > kRankCutoff * svd.sigma(0))) {
    fail(ErrorCode::rank_deficient,
         "tikhonov_projected: lambda = 0 with a numerically rank-deficient projected matrix");
  }
  return filtered_solution(svd, beta, lambda, 0.0);
}

VectorXd least_squares_projected(const ProjectedSvd& svd, double beta) {
  return filtered_solution(svd, beta, 0.0, kRankCutoff * svd.sigma(0));
}

double residual_filter_sum(const ProjectedSvd& svd, double lambda) {
  const Index k = svd.k();
  double sum = 0.0;
  for (Index i = 0; i < k; ++i) {
    const double term = filter_factor(svd.sigma(i), lambda) * svd.ue1(i);
    sum += term * term;
  }
  return sum + svd.ue1(k) * svd.ue1(k);
}

double gcv_value(const ProjectedSvd& svd, double beta, double lambda) {
  const Index k = svd.k();
  double trace = 1.0;
  for (Index i = 0; i < k; ++i) trace += filter_factor(svd.sigma(i), lambda);
  return static_cast<double>(k) * beta * beta * residual_filter_sum(svd, lambda) /
         (trace * trace);
}

double wgcv_value(const ProjectedSvd& svd, double beta, double lambda, double omega) {
  require(omega >= 0.0 && omega <= 1.0, "wgcv_value: omega must lie in [0, 1]");
  const Index k = svd.k();
  double trace = 1.0;
  for (Index i = 0; i < k; ++i) trace += weighted_trace_term(svd.sigma(i), lambda, omega);
  return static_cast<double>(k) * beta * beta * residual_filter_sum(svd, lambda) /
         (trace * trace);
}

double wgcv_weight(Index k, Index m) {
  require(m >= 1, "wgcv_weight: m must be positive");
  return std::clamp(static_cast<double>(k + 1) / static_cast<double>(m), 0.0, 1.0);
}

double ghat(const ProjectedSvd& svd, double beta, double lambda, Index m, Index n) {
  const Index k = svd.k();
  require(m > k, "ghat: requires more rows than iterations (m > k)");
  double trace = static_cast<double>(m - k);
  for (Index i = 0; i < k; ++i) trace += filter_factor(svd.sigma(i), lambda);
  return static_cast<double>(n) * beta * beta * residual_filter_sum(svd, lambda) /
         (trace * trace);
}

double SolutionErrorModel::error(const VectorXd& y) const {
  const double sq = offset_sq - 2.0 * y.dot(cross) + y.dot(gram * y);
  return std::sqrt(std::max(sq, 0.0));
}

double minimize_log_scale(const std::function<double(double)>& f, double lo, double hi) {
  require(lo > 0.0 && hi >= lo, "minimize_log_scale: empty search window");
  if (hi == lo) return lo;

  auto eval = [&f](double lambda) {
    const double v = f(lambda);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  constexpr int kGrid = 41;
  auto grid_lambda = [&](int i) {
    if (i == 0) return lo;
    if (i == kGrid - 1) return hi;
    return std::pow(10.0, a + (b - a) * i / (kGrid - 1));
  };

  int best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  std::array<double, kGrid> values{};
  for (int i = 0; i < kGrid; ++i) {
    values[static_cast<std::size_t>(i)] = eval(grid_lambda(i));
    if (values[static_cast<std::size_t>(i)] < best_value) {
      best_value = values[static_cast<std::size_t>(i)];
      best = i;
    }
  }
  double best_lambda = grid_lambda(best);

  // Golden-section refinement inside the bracketing grid cells.
  const double step = (b - a) / (kGrid - 1);
  double left = a + step * std::max(best - 1, 0);
  double right = a + step * std::min(best + 1, kGrid - 1);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = right - inv_phi * (right - left);
  double x2 = left + inv_phi * (right - left);
  double f1 = eval(std::pow(10.0, x1));
  double f2 = eval(std::pow(10.0, x2));
  for (int it = 0; it < 200 && right - left > 1e-3; ++it) {
    if (f1 <= f2) {
      right = x2;
      x2 = x1;
      f2 = f1;
      x1 = right - inv_phi * (right - left);
      f1 = eval(std::pow(10.0, x1));
    } else {
      left = x1;
      x1 = x2;
      f1 = f2;
      x2 = left + inv_phi * (right - left);
      f2 = eval(std::pow(10.0, x2));
    }
  }
  const double refined = std::pow(10.0, 0.5 * (left + right));
  const double refined_value = eval(refined);
  if (refined_value < best_value) {
    best_value = refined_value;
    best_lambda = refined;
  }
  return best_lambda;
}

double select_lambda(const LambdaRule& rule, const ProjectedSvd& svd, double beta, Index m,
                     const SolutionErrorModel* truth) {
  if (rule.kind == LambdaKind::fixed) {
    require(std::isfinite(rule.value) && rule.value >= 0.0,
            "select_lambda: fixed lambda must be finite and >= 0");
    return rule.value;
  }
  const double s1 = svd.sigma(0);
  const double lo = rule.lo.value_or(std::max(1e-12, 1e-6 * s1));
  const double hi = rule.hi.value_or(s1);
  require(lo > 0.0 && hi >= lo, "select_lambda: empty lambda search window");

  switch (rule.kind) {
    case LambdaKind::gcv:
      return minimize_log_scale([&](double l) { return gcv_value(svd, beta, l); }, lo, hi);
    case LambdaKind::wgcv: {
      const double omega = wgcv_weight(svd.k(), m);
      return minimize_log_scale([&](double l) { return wgcv_value(svd, beta, l, omega); }, lo,
                                hi);
    }
    case LambdaKind::optimal: {
      require(truth != nullptr, "select_lambda: the optimal rule needs the true solution");
      require(truth->gram.rows() == svd.k() && truth->cross.size() == svd.k(),
              "select_lambda: error model does not match the projected problem");
      return minimize_log_scale(
          [&](double l) { return truth->error(tikhonov_projected(svd, beta, l)); }, lo, hi);
    }
    case LambdaKind::fixed:
      break;
  }
  return rule.value;
}

StopCheck stop_check(std::span<const double> history, double tol) {
  require(history.size() >= 2, "stop_check: need at least two values");
  require(tol > 0.0, "stop_check: tolerance must be positive");
  const double first = history.front();
  if (first == 0.0 || !std::isfinite(first)) return StopCheck::disabled;
  const double latest = history[history.size() - 1];
  const double previous = history[history.size() - 2];
  return std::abs((latest - previous) / first) < tol ? StopCheck::converged
                                                      : StopCheck::keep_going;
}

}  // namespace lslu
