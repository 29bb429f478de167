/*
 * Copyright 2026 The LSLU Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the LSLU solvers. All handles are opaque and owned by the
 * caller once returned; release them with the matching *_free function.
 * Every function returning lslu_status leaves a message for
 * lslu_last_error() on failure (per thread). */
#ifndef LSLU_LSLU_H
#define LSLU_LSLU_H

#include <stddef.h>
#include <stdint.h>

#if defined(LSLU_BUILDING_LIBRARY)
#define LSLU_API __attribute__((visibility("default")))
#else
#define LSLU_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lslu_status {
  LSLU_OK = 0,
  LSLU_ERR_INVALID_ARGUMENT = 1,
  LSLU_ERR_DEGENERATE_DATA = 2,
  LSLU_ERR_BREAKDOWN = 3,
  LSLU_ERR_RANK_DEFICIENT = 4,
  LSLU_ERR_NUMERICAL = 5,
  LSLU_ERR_IO = 6,
  LSLU_ERR_INTERNAL = 7
} lslu_status;

typedef enum lslu_method {
  LSLU_METHOD_LSLU = 0,
  LSLU_METHOD_HYBRID_LSLU = 1,
  LSLU_METHOD_LSQR = 2,
  LSLU_METHOD_HYBRID_LSQR = 3
} lslu_method;

typedef enum lslu_pivot {
  LSLU_PIVOT_NONE = 0,
  LSLU_PIVOT_FULL = 1,
  LSLU_PIVOT_SAMPLED = 2
} lslu_pivot;

typedef enum lslu_lambda_rule {
  LSLU_LAMBDA_FIXED = 0,
  LSLU_LAMBDA_GCV = 1,
  LSLU_LAMBDA_WGCV = 2,
  LSLU_LAMBDA_OPTIMAL = 3
} lslu_lambda_rule;

typedef enum lslu_stop_reason {
  LSLU_STOP_GHAT_TOL = 0,
  LSLU_STOP_MAXITER = 1,
  LSLU_STOP_BREAKDOWN = 2
} lslu_stop_reason;

typedef enum lslu_history {
  LSLU_HISTORY_RESIDUAL_NORM = 0,
  LSLU_HISTORY_RELATIVE_ERROR = 1,
  LSLU_HISTORY_LAMBDA = 2,
  LSLU_HISTORY_GHAT = 3
} lslu_history;

typedef enum lslu_vector {
  LSLU_VECTOR_X_TRUE = 0,
  LSLU_VECTOR_B = 1,
  LSLU_VECTOR_B_EXACT = 2,
  LSLU_VECTOR_NOISE = 3
} lslu_vector;

/* SOLUTION: L (Hessenberg) or V (Golub-Kahan) columns, length n.
 * RESIDUAL: D or U columns, length m. */
typedef enum lslu_basis {
  LSLU_BASIS_SOLUTION = 0,
  LSLU_BASIS_RESIDUAL = 1
} lslu_basis;

typedef struct lslu_problem lslu_problem;
typedef struct lslu_result lslu_result;
typedef struct lslu_bounds lslu_bounds;
typedef struct lslu_uq lslu_uq;

LSLU_API const char* lslu_version(void);
LSLU_API const char* lslu_last_error(void);
LSLU_API const char* lslu_status_string(lslu_status status);
LSLU_API const char* lslu_method_name(lslu_method method);
LSLU_API const char* lslu_stop_reason_name(lslu_stop_reason reason);

/* ---- problems ---- */

LSLU_API lslu_status lslu_problem_gravity(size_t n, double depth, double noise_level,
                                          uint64_t seed, lslu_problem** out);
/* n_angles or n_detectors equal to 0 pick the defaults (grid, ceil(sqrt(2) grid)). */
LSLU_API lslu_status lslu_problem_tomo(size_t grid, size_t n_angles, size_t n_detectors,
                                       double noise_level, uint64_t seed, lslu_problem** out);
/* matrix is row-major m x n. b is the noise-free data; x_true may be NULL. */
LSLU_API lslu_status lslu_problem_dense(const double* matrix, size_t m, size_t n,
                                        const double* b, const double* x_true,
                                        double noise_level, uint64_t seed, lslu_problem** out);
/* Whitespace-separated text: one matrix row per line, vector values in any
 * layout. truth_path may be NULL. */
LSLU_API lslu_status lslu_problem_from_files(const char* matrix_path, const char* vector_path,
                                             const char* truth_path, double noise_level,
                                             uint64_t seed, lslu_problem** out);
LSLU_API void lslu_problem_free(lslu_problem* problem);

LSLU_API lslu_status lslu_problem_dims(const lslu_problem* problem, size_t* m, size_t* n);
/* Image and data shapes of 2D problems; both 0 when the problem has none. */
LSLU_API lslu_status lslu_problem_image_shape(const lslu_problem* problem, size_t* rows,
                                              size_t* cols);
LSLU_API lslu_status lslu_problem_data_shape(const lslu_problem* problem, size_t* rows,
                                             size_t* cols);
LSLU_API int lslu_problem_has_truth(const lslu_problem* problem);
/* Copies a problem vector into out (len must equal its length). */
LSLU_API lslu_status lslu_problem_vector(const lslu_problem* problem, lslu_vector which,
                                         double* out, size_t len);
/* ||e||^2 / m. */
LSLU_API lslu_status lslu_problem_noise_variance(const lslu_problem* problem, double* out);

/* ---- solvers ---- */

typedef struct lslu_solver_options {
  lslu_method method;
  size_t maxiter;
  lslu_pivot pivot;
  size_t sample_size;
  uint64_t pivot_seed;
  lslu_lambda_rule lambda_rule;
  double lambda;     /* fixed rule */
  double lambda_lo;  /* search window, 0 = default */
  double lambda_hi;
  double stop_tol;   /* <= 0 disables the stopping rule */
  int reorth;
  int pure;
  int track_truth;   /* record error histories when the problem has a truth */
} lslu_solver_options;

/* hybrid_lslu, maxiter 50, full pivoting, wgcv, stop_tol 1e-4, reorth,
 * track_truth. */
LSLU_API void lslu_solver_options_init(lslu_solver_options* options);

LSLU_API lslu_status lslu_solve(const lslu_problem* problem, const lslu_solver_options* options,
                                lslu_result** out);
LSLU_API void lslu_result_free(lslu_result* result);

typedef struct lslu_summary {
  lslu_method method;
  size_t k_reached;
  size_t k_stop;
  lslu_stop_reason stop_reason;
  double beta;
  double final_lambda;
  double final_relative_error; /* NaN when untracked */
} lslu_summary;

LSLU_API lslu_status lslu_result_summary(const lslu_result* result, lslu_summary* out);
/* len must equal k_reached. */
LSLU_API lslu_status lslu_result_history(const lslu_result* result, lslu_history which,
                                         double* out, size_t len);
/* x_k for k in [0, k_reached]; len must equal n. */
LSLU_API lslu_status lslu_result_solution(const lslu_result* result, size_t k, double* out,
                                          size_t len);
LSLU_API lslu_status lslu_result_final_solution(const lslu_result* result, double* out,
                                                size_t len);
/* Column j (0-based) of the chosen basis. */
LSLU_API lslu_status lslu_result_basis_column(const lslu_result* result, lslu_basis which,
                                              size_t j, double* out, size_t len);
LSLU_API lslu_status lslu_result_basis_columns(const lslu_result* result, lslu_basis which,
                                               size_t* out);
LSLU_API lslu_status lslu_result_write_history_csv(const lslu_result* result, const char* path);

/* ---- bound reports ---- */

typedef struct lslu_bound_row {
  size_t k;
  double r_lu;
  double r_qr;
  double kappa;
  int lower_ok;
  int upper_ok;
} lslu_bound_row;

/* LSLU against LSQR, full pivoting, x0 = 0. */
LSLU_API lslu_status lslu_bounds_unregularized(const lslu_problem* problem, size_t maxiter,
                                               lslu_bounds** out);
/* Hybrid LSLU against Hybrid LSQR with a fixed lambda > 0. */
LSLU_API lslu_status lslu_bounds_regularized(const lslu_problem* problem, double lambda,
                                             size_t maxiter, lslu_bounds** out);
LSLU_API size_t lslu_bounds_length(const lslu_bounds* bounds);
LSLU_API lslu_status lslu_bounds_row(const lslu_bounds* bounds, size_t i, lslu_bound_row* out);
LSLU_API int lslu_bounds_all_ok(const lslu_bounds* bounds);
LSLU_API lslu_status lslu_bounds_write_csv(const lslu_bounds* bounds, const char* path);
LSLU_API void lslu_bounds_free(lslu_bounds* bounds);

/* ---- posterior covariance ---- */

/* Low-rank posterior covariance from the first k basis columns of a result
 * (k = 0 uses all of them). */
LSLU_API lslu_status lslu_uq_build(const lslu_result* result, size_t k, double sigma2,
                                   double reg, lslu_uq** out);
LSLU_API size_t lslu_uq_rank(const lslu_uq* uq);
LSLU_API int lslu_uq_truncated(const lslu_uq* uq);
LSLU_API lslu_status lslu_uq_covariance_sum(const lslu_uq* uq, double* out);
LSLU_API lslu_status lslu_uq_variance(const lslu_uq* uq, double* out, size_t len);
LSLU_API void lslu_uq_free(lslu_uq* uq);

/* ---- utilities ---- */

/* values is row-major rows x cols, min-max scaled to 8 bits. */
LSLU_API lslu_status lslu_write_pgm(const double* values, size_t rows, size_t cols,
                                    const char* path);
/* Full-length inner products counted on the calling thread. */
LSLU_API uint64_t lslu_inner_product_count(void);
LSLU_API void lslu_reset_inner_product_count(void);

#ifdef __cplusplus
}
#endif

#endif
