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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits with
// the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lslu/diagnostics.hpp"
#include "lslu/error.hpp"
#include "lslu/kernels.hpp"
#include "lslu/projected.hpp"
#include "lslu/solvers.hpp"
#include "lslu/uq.hpp"
#include "support/oracles.hpp"

namespace {

using namespace lslu;

struct Outcome {
  bool pass = true;
  std::vector<std::string> failures;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    failures.push_back(what);
  }

  std::string line() const {
    std::string out = detail.str();
    if (failures.empty()) return out;
    out += " | failed: ";
    for (std::size_t i = 0; i < std::min<std::size_t>(failures.size(), 4); ++i) {
      out += (i ? "; " : "") + failures[i];
    }
    if (failures.size() > 4) out += "; +" + std::to_string(failures.size() - 4) + " more";
    return out;
  }
};

std::string num(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::size_t u(Index i) { return static_cast<std::size_t>(i); }

struct SuiteCase {
  std::string name;
  LinearOperator op;
  VectorXd b;
};

std::vector<SuiteCase> structure_suite() {
  std::vector<SuiteCase> suite;
  suite.push_back({"random100x80", make_dense_operator(oracle::random_matrix(100, 80, 21)),
                   oracle::random_vector(100, 22)});
  const InverseProblem g = make_gravity_problem(64, 0.25, 1e-2, 0);
  suite.push_back({"gravity64", g.op, g.b});
  const InverseProblem t = make_tomo_problem(TomoGeometry::with_defaults(16), 1e-2, 0);
  suite.push_back({"tomo16", t.op, t.b});
  return suite;
}

std::vector<std::pair<std::string, PivotStrategy>> strategies() {
  return {{"none", PivotStrategy::no_pivoting()},
          {"full", PivotStrategy::full_pivoting()},
          {"sampled", PivotStrategy::sampled(10, 42)}};
}

// Runs the process, tolerating the unpivoted start failure on data with an
// exact zero in the leading entry.
std::optional<HessenbergState> run_process(const SuiteCase& c, const PivotStrategy& s,
                                           Index steps) {
  try {
    return hess_run(c.op, c.b, VectorXd::Zero(c.op.cols()), s, steps);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::breakdown) return std::nullopt;
    throw;
  }
}

bool exact_structure(const HessenbergState& s) {
  const MatrixXd L = s.L();
  const MatrixXd D = s.D();
  const auto& g = s.col_perm();
  const auto& t = s.row_perm();
  for (Index j = 0; j < L.cols(); ++j) {
    if (L(g[u(j)], j) != 1.0) return false;
    for (Index i = 0; i < j; ++i) {
      if (L(g[u(i)], j) != 0.0) return false;
    }
  }
  for (Index j = 0; j < D.cols(); ++j) {
    if (D(t[u(j)], j) != 1.0) return false;
    for (Index i = 0; i < j; ++i) {
      if (D(t[u(i)], j) != 0.0) return false;
    }
  }
  return true;
}

Outcome structural_invariants() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  int runs = 0;
  Index steps = 0;
  for (const SuiteCase& c : structure_suite()) {
    for (const auto& [name, strategy] : strategies()) {
      const auto s = run_process(c, strategy, 15);
      if (!s) continue;
      ++runs;
      steps += s->k();
      o.require(exact_structure(*s), c.name + "/" + name);
    }
  }
  const double secs = seconds_since(t0);
  o.require(secs < 5.0, "runtime " + num(secs) + " s");
  o.detail << runs << " runs, " << steps << " steps, " << num(secs)
           << " s";
  return o;
}

Outcome factorization_relations() {
  Outcome o;
  double worst = 0.0;
  for (const SuiteCase& c : structure_suite()) {
    const MatrixXd A = c.op.to_dense();
    for (const auto& [name, strategy] : strategies()) {
      const auto s = run_process(c, strategy, 15);
      if (!s || s->k() == 0) continue;
      const RelationResiduals r = relation_residuals(*s, c.op);
      const double fs = A.norm() * MatrixXd(s->L()).norm();
      const double as = A.norm() * MatrixXd(s->D().leftCols(s->k())).norm();
      worst = std::max({worst, r.forward / fs, r.adjoint / as});
      o.require(r.forward <= 1e-10 * fs && r.adjoint <= 1e-10 * as, c.name + "/" + name);
    }
  }
  o.detail << "worst scaled residual " << num(worst);
  return o;
}

Outcome krylov_spans() {
  Outcome o;
  double worst = 0.0;
  int checks = 0;
  for (Index n : {6, 10, 12}) {
    for (std::uint64_t seed : {1u, 2u}) {
      const MatrixXd A = oracle::conditioned_matrix(12, n, 1.0, 2.0, seed + 10 * u(n));
      const VectorXd b = oracle::random_vector(12, seed + 100);
      const HessenbergState s = hess_run(make_dense_operator(A), b, VectorXd::Zero(n),
                                         PivotStrategy::full_pivoting(), n);
      const MatrixXd P = oracle::krylov_matrix(A.transpose() * A, A.transpose() * b, s.k());
      const MatrixXd C = oracle::krylov_matrix(A * A.transpose(), b, s.k());
      for (Index k = 1; k <= s.k(); ++k) {
        const MatrixXd L = s.L().leftCols(k);
        const MatrixXd D = s.D().leftCols(k);
        MatrixXd LP(n, 2 * k);
        LP << oracle::normalize_columns(L), oracle::normalize_columns(P.leftCols(k));
        MatrixXd DC(12, 2 * k);
        DC << oracle::normalize_columns(D), oracle::normalize_columns(C.leftCols(k));
        const double gap = std::max(oracle::span_gap(L, P.leftCols(k)),
                                    oracle::span_gap(D, C.leftCols(k)));
        worst = std::max(worst, gap);
        ++checks;
        const bool ranks = oracle::numerical_rank(oracle::normalize_columns(L), 1e-10) == k &&
                           oracle::numerical_rank(LP, 1e-6) == k &&
                           oracle::numerical_rank(DC, 1e-6) == k;
        o.require(ranks && gap <= 1e-6, "n=" + std::to_string(n) + " k=" + std::to_string(k));
      }
    }
  }
  o.detail << checks << " (n, k) pairs, largest span gap "
           << num(worst);
  return o;
}

Outcome qmr_identity() {
  Outcome o;
  double worst = 0.0;
  for (const SuiteCase& c : structure_suite()) {
    SolverConfig cfg;
    cfg.method = Method::lslu;
    cfg.maxiter = 15;
    const SolveResult r = run_lslu(c.op, c.b, cfg);
    const HessenbergState& s = *r.hessenberg;
    const MatrixXd A = c.op.to_dense();
    for (Index k = 1; k <= r.k_reached; ++k) {
      const VectorXd& y = r.y[u(k - 1)];
      VectorXd be1 = VectorXd::Zero(k + 1);
      be1(0) = r.beta;
      const double small = (be1 - MatrixXd(s.H()).topLeftCorner(k + 1, k) * y).norm();
      const VectorXd res = c.b - A * r.solution_at(k);
      const double coord =
          MatrixXd(s.D().leftCols(k + 1)).completeOrthogonalDecomposition().solve(res).norm();
      const double rel = std::abs(small - coord) / coord;
      worst = std::max(worst, rel);
      o.require(rel <= 1e-8, c.name + " k=" + std::to_string(k));
    }
  }
  o.detail << "worst relative gap " << num(worst);
  return o;
}

void check_bounds(Outcome& o, const BoundReport& r, Index expected, const std::string& name,
                  double& kappa_max) {
  o.require(static_cast<Index>(r.rows.size()) == expected,
            name + " rows " + std::to_string(r.rows.size()));
  for (const BoundRow& row : r.rows) {
    kappa_max = std::max(kappa_max, row.kappa);
    o.require(row.lower_ok && row.upper_ok, name + " k=" + std::to_string(row.k));
  }
}

Outcome residual_bounds() {
  Outcome o;
  double kappa = 0.0;
  const InverseProblem g = make_gravity_problem(40, 0.25, 1e-2, 0);
  check_bounds(o, unregularized_bounds(g.op, g.b, 20), 20, "gravity40", kappa);
  check_bounds(o,
               unregularized_bounds(make_dense_operator(oracle::random_matrix(60, 40, 12)),
                               oracle::random_vector(60, 13), 20),
               20, "random60x40", kappa);
  o.detail << "40 iterations checked, max kappa " << num(kappa);
  return o;
}

Outcome regularized_residual_bounds() {
  Outcome o;
  double kappa = 0.0;
  const InverseProblem g = make_gravity_problem(64, 0.25, 1e-2, 0);
  const LinearOperator rnd = make_dense_operator(oracle::random_matrix(30, 20, 14));
  const VectorXd rb = oracle::random_vector(30, 15);
  for (double lambda : {0.01, 0.1}) {
    check_bounds(o, regularized_bounds(g.op, g.b, lambda, 20), 20,
                 "gravity64 lambda=" + num(lambda), kappa);
    check_bounds(o, regularized_bounds(rnd, rb, lambda, 20), 20,
                 "random30x20 lambda=" + num(lambda), kappa);
  }
  o.detail << "80 iterations checked, max kappa " << num(kappa);
  return o;
}

Outcome exact_solve_limit() {
  Outcome o;
  double lslu_worst = 0.0;
  double std_worst = 0.0;
  double weighted_worst = 0.0;
  double lsqr_worst = 0.0;
  const double lambda = 0.1;
  for (Index n = 2; n <= 10; ++n) {
    const auto seed = static_cast<std::uint64_t>(n);
    const MatrixXd A = oracle::conditioned_matrix(n, n, 0.5, 2.0, seed);
    const VectorXd b = oracle::random_vector(n, seed + 50);
    const LinearOperator op = make_dense_operator(A);

    SolverConfig plain;
    plain.method = Method::lslu;
    plain.maxiter = 2 * n;
    const SolveResult r = run_lslu(op, b, plain);
    const VectorXd x = A.partialPivLu().solve(b);
    const double e = (r.x_final - x).norm() / x.norm();
    lslu_worst = std::max(lslu_worst, e);
    o.require(e <= 1e-8, "LSLU n=" + std::to_string(n));

    SolverConfig hybrid;
    hybrid.method = Method::hybrid_lslu;
    hybrid.maxiter = n;
    hybrid.lambda_rule = LambdaRule::fixed(lambda);
    const SolveResult h = run_hybrid_lslu(op, b, hybrid);
    const VectorXd xt = oracle::tikhonov(A, b, lambda);
    const double eh = (h.x_final - xt).norm() / xt.norm();
    std_worst = std::max(std_worst, eh);
    o.require(eh <= 1e-6, "Hybrid LSLU vs Tikhonov n=" + std::to_string(n));

    // The objective Hybrid LSLU actually minimizes at k = n.
    const MatrixXd D = h.hessenberg->D().leftCols(h.k_reached);
    const MatrixXd L = h.hessenberg->L();
    if (D.cols() == n && L.cols() == n) {
      const VectorXd xw = oracle::weighted_tikhonov(A, b, D.inverse(), L.inverse(), lambda);
      weighted_worst = std::max(weighted_worst, (h.x_final - xw).norm() / xw.norm());
    }
    hybrid.method = Method::hybrid_lsqr;
    const SolveResult q = run_hybrid_lsqr(op, b, hybrid);
    lsqr_worst = std::max(lsqr_worst, (q.x_final - xt).norm() / xt.norm());
  }
  o.detail << "lambda " << lambda << ", LSLU vs dense "
           << num(lslu_worst) << ", Hybrid LSLU vs Tikhonov " << num(std_worst)
           << ", Hybrid LSLU vs its weighted Tikhonov problem " << num(weighted_worst)
           << ", Hybrid LSQR vs Tikhonov " << num(lsqr_worst);
  return o;
}

MatrixXd random_hessenberg(Index k, std::uint64_t seed) {
  MatrixXd H = oracle::random_matrix(k + 1, k, seed);
  for (Index j = 0; j < k; ++j) {
    for (Index i = j + 2; i <= k; ++i) H(i, j) = 0.0;
  }
  return H;
}

Outcome closed_forms() {
  Outcome o;
  double worst = 0.0;
  int evaluations = 0;
  for (Index k = 1; k <= 8; ++k) {
    for (std::uint64_t rep = 0; rep < 3; ++rep) {
      const MatrixXd H = random_hessenberg(k, 200 + 10 * u(k) + rep);
      const ProjectedSvd svd = svd_small(H);
      const double beta = 0.5 + static_cast<double>(rep);
      for (double lambda : {1e-4, 1e-2, 0.3, 1.0, 30.0}) {
        for (double omega : {0.0, 0.25, 0.7}) {
          const double g = gcv_value(svd, beta, lambda);
          const double w = wgcv_value(svd, beta, lambda, omega);
          const double gh = ghat(svd, beta, lambda, 50, 40);
          const double eg = std::abs(g - oracle::gcv_direct(H, beta, lambda)) / g;
          const double ew = std::abs(w - oracle::wgcv_direct(H, beta, lambda, omega)) / w;
          const double eh = std::abs(gh - oracle::ghat_direct(H, beta, lambda, 50, 40)) / gh;
          worst = std::max({worst, eg, ew, eh});
          ++evaluations;
          o.require(eg <= 1e-10 && ew <= 1e-10 && eh <= 1e-10,
                    "k=" + std::to_string(k) + " lambda=" + num(lambda));
          o.require(wgcv_value(svd, beta, lambda, 1.0) == g,
                    "omega=1 not bitwise at k=" + std::to_string(k));
        }
      }
    }
  }
  o.detail << evaluations << " evaluations, worst relative error "
           << num(worst);
  return o;
}

Outcome worked_examples() {
  Outcome o;
  MatrixXd A(2, 2);
  A << 1, 2, 3, 4;
  const LinearOperator op = make_dense_operator(A);
  HessenbergState s = hess_init(op, VectorXd::Ones(2), VectorXd::Zero(2),
                                PivotStrategy::no_pivoting());
  hess_step(s, op);
  const auto near = [](double a, double b) { return std::abs(a - b) <= 1e-12; };
  o.require(s.k() == 1, "Hessenberg step count");
  o.require(near(s.W()(0, 0), 4.0), "W");
  o.require(near(s.H()(0, 0), 4.0) && near(s.H()(1, 0), 5.0), "H");
  o.require(near(s.L()(0, 0), 1.0) && near(s.L()(1, 0), 1.5), "l1");
  o.require(near(s.D()(0, 1), 0.0) && near(s.D()(1, 1), 1.0), "d2");

  VectorXd b(2);
  b << 1, 2;
  const HessenbergState id = hess_run(make_dense_operator(MatrixXd::Identity(2, 2)), b,
                                      VectorXd::Zero(2), PivotStrategy::full_pivoting(), 5);
  const UqApprox uq = build_uq(id, 1.0, 1.0);
  const VectorXd var = variance_diagonal(uq);
  o.require(id.k() == 1 && uq.rank() == 1, "UQ rank");
  if (uq.rank() == 1) o.require(near(uq.Delta(0, 0), 0.4), "Delta");
  o.require(near(var(0), 0.9) && near(var(1), 0.6), "variance diagonal");
  o.require(near(covariance_sum(uq), 1.1), "covariance sum");
  o.detail << "W=" << s.W()(0, 0) << " H=[" << s.H()(0, 0) << ";"
           << s.H()(1, 0) << "] Delta=" << (uq.rank() ? uq.Delta(0, 0) : 0.0)
           << " sum=" << covariance_sum(uq);
  return o;
}

double min_error(const SolveResult& r) {
  return *std::min_element(r.relative_error.begin(), r.relative_error.end());
}

Outcome semiconvergence() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  struct Case {
    std::string name;
    InverseProblem p;
    Index maxiter;
  };
  std::vector<Case> cases;
  cases.push_back({"gravity64", make_gravity_problem(64, 0.25, 1e-2, 0), 50});
  cases.push_back({"tomo32", make_tomo_problem(TomoGeometry::with_defaults(32), 1e-2, 0), 100});
  for (const Case& c : cases) {
    SolverConfig cfg;
    cfg.maxiter = c.maxiter;
    cfg.x_true = c.p.x_true;
    cfg.method = Method::lslu;
    const double lu = min_error(run_lslu(c.p.op, c.p.b, cfg));
    cfg.method = Method::lsqr;
    const double qr = min_error(run_lsqr(c.p.op, c.p.b, cfg));
    o.require(lu <= 1.5 * qr, c.name + " LSLU/LSQR " + num(lu / qr));
    o.detail << c.name << " min error LSLU " << num(lu) << " LSQR " << num(qr) << " (ratio "
             << num(lu / qr) << "), sampled";
    cfg.method = Method::lslu;
    for (Index size : {25, 50, 100}) {
      cfg.pivot = PivotStrategy::sampled(size, 0);
      const double sampled = min_error(run_lslu(c.p.op, c.p.b, cfg));
      o.require(sampled <= 2.0 * lu, c.name + " sampled " + std::to_string(size) + " ratio " +
                                         num(sampled / lu));
      o.detail << " " << size << ":" << num(sampled);
    }
    o.detail << "; ";
  }
  const double secs = seconds_since(t0);
  o.require(secs < 30.0, "runtime " + num(secs) + " s");
  o.detail << num(secs) << " s";
  return o;
}

Outcome inner_product_free() {
  Outcome o;
  const InverseProblem g = make_gravity_problem(64, 0.25, 1e-2, 0);
  const InverseProblem t = make_tomo_problem(TomoGeometry::with_defaults(16), 1e-2, 0);
  std::uint64_t lslu_family = 0;
  for (const InverseProblem* p : {&g, &t}) {
    for (Method m : {Method::lslu, Method::hybrid_lslu}) {
      SolverConfig cfg;
      cfg.method = m;
      cfg.maxiter = 30;
      cfg.pure = true;
      cfg.stop_tol = 1e-6;
      cfg.pivot = PivotStrategy::sampled(25, 3);
      kernels::reset_reduction_counters();
      solve(p->op, p->b, cfg);
      cfg.pivot = PivotStrategy::full_pivoting();
      solve(p->op, p->b, cfg);
      lslu_family += kernels::reduction_counters().inner_products +
                     kernels::reduction_counters().reduced_entries;
    }
  }
  o.require(lslu_family == 0, "LSLU family counted " + std::to_string(lslu_family));
  SolverConfig cfg;
  cfg.method = Method::hybrid_lsqr;
  cfg.maxiter = 30;
  cfg.pure = true;
  kernels::reset_reduction_counters();
  solve(g.op, g.b, cfg);
  const std::uint64_t gk = kernels::reduction_counters().inner_products;
  o.require(gk > 0, "counter saw nothing for Golub-Kahan");
  o.detail << "LSLU family " << lslu_family
           << " inner products; Hybrid LSQR control " << gk;
  return o;
}

Outcome uq_agreement() {
  Outcome o;
  const InverseProblem p = make_gravity_problem(32, 0.25, 1e-2, 0);
  SolverConfig cfg;
  cfg.method = Method::hybrid_lsqr;
  cfg.maxiter = 15;
  const double lambda = run_hybrid_lsqr(p.op, p.b, cfg).final_lambda();
  const HessenbergState hs =
      hess_run(p.op, p.b, VectorXd::Zero(32), PivotStrategy::full_pivoting(), 15);
  const BidiagState gk = gk_run(p.op, p.b, VectorXd::Zero(32), 15, true);
  const double sigma2 = p.noise_variance();
  double worst = 0.0;
  o.require(hs.k() == 15 && gk.k() == 15, "fewer than 15 steps");
  for (Index k = 1; k <= std::min(hs.k(), gk.k()); ++k) {
    const double a = covariance_sum(build_uq(hs, sigma2, lambda, k));
    const double b = covariance_sum(build_uq(gk, sigma2, lambda, k));
    const double rel = std::abs(a - b) / std::abs(b);
    worst = std::max(worst, rel);
    o.require(rel <= 0.05, "k=" + std::to_string(k) + " " + num(rel));
  }

  double woodbury = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Index n = 20;
    const Index r = 1 + static_cast<Index>(seed % 8);
    const MatrixXd Z = oracle::random_matrix(n, r, seed + 3000);
    const VectorXd spectrum =
        oracle::random_vector(r, seed + 4000).cwiseAbs().array() + 0.1;
    const double reg = 0.05 + 0.1 * static_cast<double>(seed % 5);
    const double s2 = 0.5;
    const MatrixXd Gamma = posterior_covariance(make_uq(Z, spectrum, s2, reg));
    MatrixXd M = Z * spectrum.asDiagonal() * Z.transpose();
    M.diagonal().array() += reg;
    const double err = (M * Gamma / s2 - MatrixXd::Identity(n, n)).norm();
    woodbury = std::max(woodbury, err);
    o.require(err <= 1e-10, "Woodbury seed " + std::to_string(seed));
  }
  o.detail << "reg " << num(lambda) << ", worst relative gap "
           << num(worst) << ", worst Woodbury residual " << num(woodbury);
  return o;
}

Outcome stopping_rule() {
  Outcome o;
  const InverseProblem p = make_gravity_problem(64, 0.25, 1e-2, 0);
  SolverConfig cfg;
  cfg.method = Method::hybrid_lslu;
  cfg.maxiter = 50;
  cfg.lambda_rule = LambdaRule::wgcv();
  cfg.stop_tol = 1e-4;
  cfg.x_true = p.x_true;
  const SolveResult r = solve(p.op, p.b, cfg);
  const double best = min_error(r);
  const auto best_k = std::min_element(r.relative_error.begin(), r.relative_error.end()) -
                      r.relative_error.begin() + 1;
  const double at_stop = r.final_relative_error();
  o.require(r.stop_reason == StopReason::ghat_tol && r.k_stop < 50,
            std::string("stop reason ") + to_string(r.stop_reason));
  o.require(at_stop <= 1.1 * best, "error at stop " + num(at_stop / best) + "x the minimum");
  o.detail << "k_stop " << r.k_stop << " error " << num(at_stop)
           << ", minimum " << num(best) << " at k " << best_k;
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"structural invariants", structural_invariants},
      {"factorization relations", factorization_relations},
      {"Krylov span equivalence", krylov_spans},
      {"quasi-minimal residual identity", qmr_identity},
      {"unregularized residual bounds", residual_bounds},
      {"regularized residual bounds", regularized_residual_bounds},
      {"exact solve limit", exact_solve_limit},
      {"selection function closed forms", closed_forms},
      {"worked examples", worked_examples},
      {"semiconvergence and competitiveness", semiconvergence},
      {"inner-product-free iteration", inner_product_free},
      {"posterior covariance agreement", uq_agreement},
      {"stopping rule", stopping_rule},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string verdict;
    std::string detail;
    try {
      const Outcome o = criteria[i].second();
      verdict = o.pass ? "PASS" : "FAIL";
      detail = o.line();
    } catch (const std::exception& e) {
      verdict = "FAIL";
      detail = std::string("exception: ") + e.what();
    }
    if (verdict != "PASS") ++failures;
    std::printf("criterion %2zu %s  %s: %s\n", i + 1, verdict.c_str(), criteria[i].first.c_str(),
                detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures;
}
