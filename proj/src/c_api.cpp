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

#include "lslu/lslu.h"

#include <cmath>
#include <exception>
#include <limits>
#include <new>
#include <string>

#include "lslu/diagnostics.hpp"
#include "lslu/error.hpp"
#include "lslu/io.hpp"
#include "lslu/kernels.hpp"
#include "lslu/solvers.hpp"
#include "lslu/uq.hpp"

struct lslu_problem {
  lslu::InverseProblem p;
};

struct lslu_result {
  lslu::SolveResult r;
};

struct lslu_bounds {
  lslu::BoundReport report;
};

struct lslu_uq {
  lslu::UqApprox uq;
};

namespace {

using lslu::ErrorCode;
using lslu::Index;
using lslu::MatrixXd;
using lslu::VectorXd;

thread_local std::string g_last_error;

lslu_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_input: return LSLU_ERR_INVALID_ARGUMENT;
    case ErrorCode::degenerate_data: return LSLU_ERR_DEGENERATE_DATA;
    case ErrorCode::breakdown: return LSLU_ERR_BREAKDOWN;
    case ErrorCode::rank_deficient: return LSLU_ERR_RANK_DEFICIENT;
    case ErrorCode::numerical: return LSLU_ERR_NUMERICAL;
    case ErrorCode::io: return LSLU_ERR_IO;
  }
  return LSLU_ERR_INTERNAL;
}

template <class F>
lslu_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return LSLU_OK;
  } catch (const lslu::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return LSLU_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LSLU_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return LSLU_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) lslu::fail(ErrorCode::invalid_input, std::string(what) + " is null");
}

void copy_out(const VectorXd& v, double* out, std::size_t len) {
  need(out, "output buffer");
  if (static_cast<std::size_t>(v.size()) != len) {
    lslu::fail(ErrorCode::invalid_input, "output buffer has length " + std::to_string(len) +
                                             ", expected " + std::to_string(v.size()));
  }
  for (Index i = 0; i < v.size(); ++i) out[i] = v(i);
}

Index to_index(std::size_t v, const char* what) {
  if (v > static_cast<std::size_t>(std::numeric_limits<Index>::max())) {
    lslu::fail(ErrorCode::invalid_input, std::string(what) + " is too large");
  }
  return static_cast<Index>(v);
}

lslu::InverseProblem problem_from_dense(MatrixXd A, VectorXd b, VectorXd x_true,
                                        double noise_level, std::uint64_t seed) {
  lslu::require(b.size() == A.rows(), "data vector length does not match the matrix rows");
  lslu::require(x_true.size() == 0 || x_true.size() == A.cols(),
                "truth vector length does not match the matrix columns");
  lslu::NoisyData noisy = lslu::add_noise(b, noise_level, seed);
  return lslu::InverseProblem{lslu::make_dense_operator(std::move(A)),
                              std::move(x_true),
                              std::move(b),
                              std::move(noisy.b),
                              std::move(noisy.e),
                              noise_level,
                              seed,
                              std::nullopt,
                              std::nullopt};
}

lslu::PivotStrategy to_pivot(const lslu_solver_options& o) {
  switch (o.pivot) {
    case LSLU_PIVOT_NONE: return lslu::PivotStrategy::no_pivoting();
    case LSLU_PIVOT_FULL: return lslu::PivotStrategy::full_pivoting();
    case LSLU_PIVOT_SAMPLED:
      return lslu::PivotStrategy::sampled(to_index(o.sample_size, "sample_size"), o.pivot_seed);
  }
  lslu::fail(ErrorCode::invalid_input, "unknown pivot strategy");
}

lslu::LambdaRule to_rule(const lslu_solver_options& o) {
  lslu::LambdaRule rule;
  switch (o.lambda_rule) {
    case LSLU_LAMBDA_FIXED: rule = lslu::LambdaRule::fixed(o.lambda); break;
    case LSLU_LAMBDA_GCV: rule = lslu::LambdaRule::gcv(); break;
    case LSLU_LAMBDA_WGCV: rule = lslu::LambdaRule::wgcv(); break;
    case LSLU_LAMBDA_OPTIMAL: rule = lslu::LambdaRule::optimal(); break;
    default: lslu::fail(ErrorCode::invalid_input, "unknown lambda rule");
  }
  if (o.lambda_lo > 0.0) rule.lo = o.lambda_lo;
  if (o.lambda_hi > 0.0) rule.hi = o.lambda_hi;
  return rule;
}

lslu::Method to_method(lslu_method m) {
  switch (m) {
    case LSLU_METHOD_LSLU: return lslu::Method::lslu;
    case LSLU_METHOD_HYBRID_LSLU: return lslu::Method::hybrid_lslu;
    case LSLU_METHOD_LSQR: return lslu::Method::lsqr;
    case LSLU_METHOD_HYBRID_LSQR: return lslu::Method::hybrid_lsqr;
  }
  lslu::fail(ErrorCode::invalid_input, "unknown method");
}

lslu_method from_method(lslu::Method m) {
  switch (m) {
    case lslu::Method::lslu: return LSLU_METHOD_LSLU;
    case lslu::Method::hybrid_lslu: return LSLU_METHOD_HYBRID_LSLU;
    case lslu::Method::lsqr: return LSLU_METHOD_LSQR;
    case lslu::Method::hybrid_lsqr: return LSLU_METHOD_HYBRID_LSQR;
  }
  return LSLU_METHOD_LSLU;
}

lslu_stop_reason from_reason(lslu::StopReason r) {
  switch (r) {
    case lslu::StopReason::ghat_tol: return LSLU_STOP_GHAT_TOL;
    case lslu::StopReason::maxiter: return LSLU_STOP_MAXITER;
    case lslu::StopReason::breakdown: return LSLU_STOP_BREAKDOWN;
  }
  return LSLU_STOP_MAXITER;
}

bool has_truth(const lslu::InverseProblem& p) {
  return p.x_true.size() == p.op.cols() && p.x_true.size() > 0;
}

}  // namespace

extern "C" {

const char* lslu_version(void) { return "1.0.0"; }

const char* lslu_last_error(void) { return g_last_error.c_str(); }

const char* lslu_status_string(lslu_status status) {
  switch (status) {
    case LSLU_OK: return "ok";
    case LSLU_ERR_INVALID_ARGUMENT: return "invalid argument";
    case LSLU_ERR_DEGENERATE_DATA: return "degenerate data";
    case LSLU_ERR_BREAKDOWN: return "breakdown";
    case LSLU_ERR_RANK_DEFICIENT: return "rank deficient";
    case LSLU_ERR_NUMERICAL: return "numerical failure";
    case LSLU_ERR_IO: return "i/o error";
    case LSLU_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* lslu_method_name(lslu_method method) {
  switch (method) {
    case LSLU_METHOD_LSLU: return "lslu";
    case LSLU_METHOD_HYBRID_LSLU: return "hybrid_lslu";
    case LSLU_METHOD_LSQR: return "lsqr";
    case LSLU_METHOD_HYBRID_LSQR: return "hybrid_lsqr";
  }
  return "unknown";
}

const char* lslu_stop_reason_name(lslu_stop_reason reason) {
  switch (reason) {
    case LSLU_STOP_GHAT_TOL: return "ghat_tol";
    case LSLU_STOP_MAXITER: return "maxiter";
    case LSLU_STOP_BREAKDOWN: return "breakdown";
  }
  return "unknown";
}

lslu_status lslu_problem_gravity(size_t n, double depth, double noise_level, uint64_t seed,
                                 lslu_problem** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    *out = new lslu_problem{lslu::make_gravity_problem(to_index(n, "n"), depth, noise_level, seed)};
  });
}

lslu_status lslu_problem_tomo(size_t grid, size_t n_angles, size_t n_detectors,
                              double noise_level, uint64_t seed, lslu_problem** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    lslu::TomoGeometry g = lslu::TomoGeometry::with_defaults(to_index(grid, "grid"));
    if (n_angles > 0) g.n_angles = to_index(n_angles, "n_angles");
    if (n_detectors > 0) g.n_detectors = to_index(n_detectors, "n_detectors");
    *out = new lslu_problem{lslu::make_tomo_problem(g, noise_level, seed)};
  });
}

lslu_status lslu_problem_dense(const double* matrix, size_t m, size_t n, const double* b,
                               const double* x_true, double noise_level, uint64_t seed,
                               lslu_problem** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    need(matrix, "matrix");
    need(b, "b");
    const Index rows = to_index(m, "m");
    const Index cols = to_index(n, "n");
    lslu::require(rows >= 1 && cols >= 1, "matrix must be non-empty");
    MatrixXd A = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                Eigen::RowMajor>>(matrix, rows, cols);
    VectorXd bv = Eigen::Map<const VectorXd>(b, rows);
    VectorXd xt = x_true ? VectorXd(Eigen::Map<const VectorXd>(x_true, cols)) : VectorXd();
    *out = new lslu_problem{problem_from_dense(std::move(A), std::move(bv), std::move(xt),
                                               noise_level, seed)};
  });
}

lslu_status lslu_problem_from_files(const char* matrix_path, const char* vector_path,
                                    const char* truth_path, double noise_level, uint64_t seed,
                                    lslu_problem** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    need(matrix_path, "matrix_path");
    need(vector_path, "vector_path");
    MatrixXd A = lslu::io::read_matrix_text(matrix_path);
    VectorXd b = lslu::io::read_vector_text(vector_path);
    VectorXd xt = truth_path ? lslu::io::read_vector_text(truth_path) : VectorXd();
    *out = new lslu_problem{
        problem_from_dense(std::move(A), std::move(b), std::move(xt), noise_level, seed)};
  });
}

void lslu_problem_free(lslu_problem* problem) { delete problem; }

lslu_status lslu_problem_dims(const lslu_problem* problem, size_t* m, size_t* n) {
  return guarded([&] {
    need(problem, "problem");
    if (m) *m = static_cast<size_t>(problem->p.op.rows());
    if (n) *n = static_cast<size_t>(problem->p.op.cols());
  });
}

lslu_status lslu_problem_image_shape(const lslu_problem* problem, size_t* rows, size_t* cols) {
  return guarded([&] {
    need(problem, "problem");
    const auto& s = problem->p.image_shape;
    if (rows) *rows = s ? static_cast<size_t>(s->first) : 0;
    if (cols) *cols = s ? static_cast<size_t>(s->second) : 0;
  });
}

lslu_status lslu_problem_data_shape(const lslu_problem* problem, size_t* rows, size_t* cols) {
  return guarded([&] {
    need(problem, "problem");
    const auto& s = problem->p.data_shape;
    if (rows) *rows = s ? static_cast<size_t>(s->first) : 0;
    if (cols) *cols = s ? static_cast<size_t>(s->second) : 0;
  });
}

int lslu_problem_has_truth(const lslu_problem* problem) {
  return problem != nullptr && has_truth(problem->p) ? 1 : 0;
}

lslu_status lslu_problem_vector(const lslu_problem* problem, lslu_vector which, double* out,
                                size_t len) {
  return guarded([&] {
    need(problem, "problem");
    const lslu::InverseProblem& p = problem->p;
    switch (which) {
      case LSLU_VECTOR_X_TRUE:
        lslu::require(has_truth(p), "problem has no true solution");
        copy_out(p.x_true, out, len);
        return;
      case LSLU_VECTOR_B: copy_out(p.b, out, len); return;
      case LSLU_VECTOR_B_EXACT: copy_out(p.b_exact, out, len); return;
      case LSLU_VECTOR_NOISE: copy_out(p.e, out, len); return;
    }
    lslu::fail(ErrorCode::invalid_input, "unknown problem vector");
  });
}

lslu_status lslu_problem_noise_variance(const lslu_problem* problem, double* out) {
  return guarded([&] {
    need(problem, "problem");
    need(out, "out");
    *out = problem->p.noise_variance();
  });
}

void lslu_solver_options_init(lslu_solver_options* options) {
  if (options == nullptr) return;
  *options = lslu_solver_options{};
  options->method = LSLU_METHOD_HYBRID_LSLU;
  options->maxiter = 50;
  options->pivot = LSLU_PIVOT_FULL;
  options->sample_size = 0;
  options->pivot_seed = 0;
  options->lambda_rule = LSLU_LAMBDA_WGCV;
  options->lambda = 0.0;
  options->lambda_lo = 0.0;
  options->lambda_hi = 0.0;
  options->stop_tol = 1e-4;
  options->reorth = 1;
  options->pure = 0;
  options->track_truth = 1;
}

lslu_status lslu_solve(const lslu_problem* problem, const lslu_solver_options* options,
                       lslu_result** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    need(problem, "problem");
    need(options, "options");
    const lslu::InverseProblem& p = problem->p;
    lslu::SolverConfig config;
    config.method = to_method(options->method);
    config.maxiter = to_index(options->maxiter, "maxiter");
    config.pivot = to_pivot(*options);
    config.lambda_rule = to_rule(*options);
    if (options->stop_tol > 0.0) config.stop_tol = options->stop_tol;
    if (has_truth(p) && (options->track_truth || options->lambda_rule == LSLU_LAMBDA_OPTIMAL)) {
      config.x_true = p.x_true;
    }
    config.reorth = options->reorth != 0;
    config.pure = options->pure != 0;
    *out = new lslu_result{lslu::solve(p.op, p.b, config)};
  });
}

void lslu_result_free(lslu_result* result) { delete result; }

lslu_status lslu_result_summary(const lslu_result* result, lslu_summary* out) {
  return guarded([&] {
    need(result, "result");
    need(out, "out");
    const lslu::SolveResult& r = result->r;
    out->method = from_method(r.method);
    out->k_reached = static_cast<size_t>(r.k_reached);
    out->k_stop = static_cast<size_t>(r.k_stop);
    out->stop_reason = from_reason(r.stop_reason);
    out->beta = r.beta;
    out->final_lambda = r.final_lambda();
    out->final_relative_error = r.final_relative_error();
  });
}

lslu_status lslu_result_history(const lslu_result* result, lslu_history which, double* out,
                                size_t len) {
  return guarded([&] {
    need(result, "result");
    const lslu::SolveResult& r = result->r;
    const std::vector<double>* h = nullptr;
    switch (which) {
      case LSLU_HISTORY_RESIDUAL_NORM: h = &r.residual_norm; break;
      case LSLU_HISTORY_RELATIVE_ERROR: h = &r.relative_error; break;
      case LSLU_HISTORY_LAMBDA: h = &r.lambda; break;
      case LSLU_HISTORY_GHAT: h = &r.ghat; break;
      default: lslu::fail(ErrorCode::invalid_input, "unknown history");
    }
    copy_out(Eigen::Map<const VectorXd>(h->data(), static_cast<Index>(h->size())), out, len);
  });
}

lslu_status lslu_result_solution(const lslu_result* result, size_t k, double* out, size_t len) {
  return guarded([&] {
    need(result, "result");
    copy_out(result->r.solution_at(to_index(k, "k")), out, len);
  });
}

lslu_status lslu_result_final_solution(const lslu_result* result, double* out, size_t len) {
  return guarded([&] {
    need(result, "result");
    copy_out(result->r.x_final, out, len);
  });
}

lslu_status lslu_result_basis_columns(const lslu_result* result, lslu_basis which,
                                      size_t* out) {
  return guarded([&] {
    need(result, "result");
    need(out, "out");
    const lslu::SolveResult& r = result->r;
    Index cols = 0;
    if (r.hessenberg) {
      cols = which == LSLU_BASIS_SOLUTION ? r.hessenberg->k() : r.hessenberg->residual_columns();
    } else if (r.bidiag) {
      cols = which == LSLU_BASIS_SOLUTION ? r.bidiag->k() : r.bidiag->U().cols();
    }
    *out = static_cast<size_t>(cols);
  });
}

lslu_status lslu_result_basis_column(const lslu_result* result, lslu_basis which, size_t j,
                                     double* out, size_t len) {
  return guarded([&] {
    need(result, "result");
    const lslu::SolveResult& r = result->r;
    const Index col = to_index(j, "j");
    MatrixXd basis;
    if (r.hessenberg) {
      basis = which == LSLU_BASIS_SOLUTION ? MatrixXd(r.hessenberg->L())
                                           : MatrixXd(r.hessenberg->D());
    } else if (r.bidiag) {
      basis = which == LSLU_BASIS_SOLUTION ? MatrixXd(r.bidiag->V()) : MatrixXd(r.bidiag->U());
    }
    lslu::require(col < basis.cols(), "basis column index out of range");
    copy_out(basis.col(col), out, len);
  });
}

lslu_status lslu_result_write_history_csv(const lslu_result* result, const char* path) {
  return guarded([&] {
    need(result, "result");
    need(path, "path");
    lslu::io::write_history_csv(result->r, path);
  });
}

lslu_status lslu_bounds_unregularized(const lslu_problem* problem, size_t maxiter,
                                      lslu_bounds** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    need(problem, "problem");
    const Index k = to_index(maxiter, "maxiter");
    lslu::require(k >= 1, "maxiter must be at least 1");
    *out = new lslu_bounds{lslu::unregularized_bounds(problem->p.op, problem->p.b, k)};
  });
}

lslu_status lslu_bounds_regularized(const lslu_problem* problem, double lambda, size_t maxiter,
                                    lslu_bounds** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    need(problem, "problem");
    const Index k = to_index(maxiter, "maxiter");
    lslu::require(k >= 1, "maxiter must be at least 1");
    *out = new lslu_bounds{lslu::regularized_bounds(problem->p.op, problem->p.b, lambda, k)};
  });
}

size_t lslu_bounds_length(const lslu_bounds* bounds) {
  return bounds ? bounds->report.rows.size() : 0;
}

lslu_status lslu_bounds_row(const lslu_bounds* bounds, size_t i, lslu_bound_row* out) {
  return guarded([&] {
    need(bounds, "bounds");
    need(out, "out");
    lslu::require(i < bounds->report.rows.size(), "bound row index out of range");
    const lslu::BoundRow& row = bounds->report.rows[i];
    *out = lslu_bound_row{static_cast<size_t>(row.k), row.r_lu,       row.r_qr,
                          row.kappa,                  row.lower_ok ? 1 : 0, row.upper_ok ? 1 : 0};
  });
}

int lslu_bounds_all_ok(const lslu_bounds* bounds) {
  return bounds != nullptr && bounds->report.all_ok() ? 1 : 0;
}

lslu_status lslu_bounds_write_csv(const lslu_bounds* bounds, const char* path) {
  return guarded([&] {
    need(bounds, "bounds");
    need(path, "path");
    lslu::io::write_bounds_csv(bounds->report, path);
  });
}

void lslu_bounds_free(lslu_bounds* bounds) { delete bounds; }

lslu_status lslu_uq_build(const lslu_result* result, size_t k, double sigma2, double reg,
                          lslu_uq** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    need(result, "result");
    const lslu::SolveResult& r = result->r;
    std::optional<Index> kk;
    if (k > 0) kk = to_index(k, "k");
    if (r.hessenberg) {
      *out = new lslu_uq{lslu::build_uq(*r.hessenberg, sigma2, reg, kk)};
    } else if (r.bidiag) {
      *out = new lslu_uq{lslu::build_uq(*r.bidiag, sigma2, reg, kk)};
    } else {
      lslu::fail(ErrorCode::invalid_input, "result carries no factorization");
    }
  });
}

size_t lslu_uq_rank(const lslu_uq* uq) { return uq ? static_cast<size_t>(uq->uq.rank()) : 0; }

int lslu_uq_truncated(const lslu_uq* uq) { return uq && uq->uq.truncated ? 1 : 0; }

lslu_status lslu_uq_covariance_sum(const lslu_uq* uq, double* out) {
  return guarded([&] {
    need(uq, "uq");
    need(out, "out");
    *out = lslu::covariance_sum(uq->uq);
  });
}

lslu_status lslu_uq_variance(const lslu_uq* uq, double* out, size_t len) {
  return guarded([&] {
    need(uq, "uq");
    copy_out(lslu::variance_diagonal(uq->uq), out, len);
  });
}

void lslu_uq_free(lslu_uq* uq) { delete uq; }

lslu_status lslu_write_pgm(const double* values, size_t rows, size_t cols, const char* path) {
  return guarded([&] {
    need(values, "values");
    need(path, "path");
    const Index r = to_index(rows, "rows");
    const Index c = to_index(cols, "cols");
    lslu::io::write_pgm(std::span<const double>(values, rows * cols), r, c, path);
  });
}

uint64_t lslu_inner_product_count(void) {
  return lslu::kernels::reduction_counters().inner_products;
}

void lslu_reset_inner_product_count(void) { lslu::kernels::reset_reduction_counters(); }

}  // extern "C"
