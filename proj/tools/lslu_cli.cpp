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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lslu/lslu.h"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RuntimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string problem = "gravity";
  std::size_t n = 64;
  double depth = 0.25;
  std::size_t grid = 32;
  std::size_t angles = 0;
  std::size_t detectors = 0;
  std::string matrix_file;
  std::string vector_file;
  std::string truth_file;
  double noise_level = 0.01;
  std::uint64_t seed = 0;

  std::string method = "hybrid_lslu";
  std::size_t maxiter = 50;
  std::string lambda_rule = "wgcv";
  double lambda = 0.0;
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  double stop_tol = 1e-4;
  std::string pivot = "full";
  std::size_t sample_size = 0;
  std::uint64_t pivot_seed = 0;
  bool reorth = true;
  bool pure = false;

  std::string output_dir = ".";
  std::vector<std::string> emit;

  std::vector<std::string> methods = {"lslu", "lsqr"};
  std::vector<std::size_t> sample_sizes = {25, 50, 100};
  std::vector<std::size_t> basis_k = {2, 4, 6, 8, 10};
  std::vector<double> bounds_lambdas = {0.01, 0.1};
  std::size_t k_max = 15;
  double reg = 0.0;
  double sigma2 = 0.0;
};

const std::set<std::string> kEmitNames = {"history_csv", "summary_json", "recon_pgm",
                                          "basis_pgm",   "bounds_csv",   "uq_csv"};

template <class T>
void read_key(const json& j, const char* key, T& field) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  try {
    field = it->get<T>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("config key '") + key + "': " + e.what());
  }
}

void load_config_file(const std::string& path, RunConfig& c) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  static const std::set<std::string> known = {
      "problem", "n", "depth", "grid", "angles", "detectors", "matrix_file", "vector_file",
      "truth_file", "noise_level", "seed", "method", "maxiter", "lambda_rule", "lambda",
      "lambda_lo", "lambda_hi", "stop_tol", "pivot", "sample_size", "pivot_seed", "reorth",
      "pure", "output_dir", "emit", "methods", "sample_sizes", "basis_k", "bounds_lambdas",
      "k_max", "reg", "sigma2"};
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) throw UsageError("unknown config key '" + item.key() + "'");
  }
  read_key(j, "problem", c.problem);
  read_key(j, "n", c.n);
  read_key(j, "depth", c.depth);
  read_key(j, "grid", c.grid);
  read_key(j, "angles", c.angles);
  read_key(j, "detectors", c.detectors);
  read_key(j, "matrix_file", c.matrix_file);
  read_key(j, "vector_file", c.vector_file);
  read_key(j, "truth_file", c.truth_file);
  read_key(j, "noise_level", c.noise_level);
  read_key(j, "seed", c.seed);
  read_key(j, "method", c.method);
  read_key(j, "maxiter", c.maxiter);
  read_key(j, "lambda_rule", c.lambda_rule);
  read_key(j, "lambda", c.lambda);
  read_key(j, "lambda_lo", c.lambda_lo);
  read_key(j, "lambda_hi", c.lambda_hi);
  read_key(j, "stop_tol", c.stop_tol);
  read_key(j, "pivot", c.pivot);
  read_key(j, "sample_size", c.sample_size);
  read_key(j, "pivot_seed", c.pivot_seed);
  read_key(j, "reorth", c.reorth);
  read_key(j, "pure", c.pure);
  read_key(j, "output_dir", c.output_dir);
  read_key(j, "emit", c.emit);
  read_key(j, "methods", c.methods);
  read_key(j, "sample_sizes", c.sample_sizes);
  read_key(j, "basis_k", c.basis_k);
  read_key(j, "bounds_lambdas", c.bounds_lambdas);
  read_key(j, "k_max", c.k_max);
  read_key(j, "reg", c.reg);
  read_key(j, "sigma2", c.sigma2);
}

// ---- C API helpers ----

void check(lslu_status status) {
  if (status != LSLU_OK) {
    throw RuntimeError(std::string(lslu_status_string(status)) + ": " + lslu_last_error());
  }
}

struct ProblemDeleter {
  void operator()(lslu_problem* p) const { lslu_problem_free(p); }
};
struct ResultDeleter {
  void operator()(lslu_result* r) const { lslu_result_free(r); }
};
struct BoundsDeleter {
  void operator()(lslu_bounds* b) const { lslu_bounds_free(b); }
};
struct UqDeleter {
  void operator()(lslu_uq* u) const { lslu_uq_free(u); }
};
using ProblemPtr = std::unique_ptr<lslu_problem, ProblemDeleter>;
using ResultPtr = std::unique_ptr<lslu_result, ResultDeleter>;
using BoundsPtr = std::unique_ptr<lslu_bounds, BoundsDeleter>;
using UqPtr = std::unique_ptr<lslu_uq, UqDeleter>;

lslu_method parse_method(const std::string& name) {
  for (lslu_method m : {LSLU_METHOD_LSLU, LSLU_METHOD_HYBRID_LSLU, LSLU_METHOD_LSQR,
                        LSLU_METHOD_HYBRID_LSQR}) {
    if (name == lslu_method_name(m)) return m;
  }
  throw UsageError("unknown method '" + name + "'");
}

lslu_pivot parse_pivot(const std::string& name) {
  if (name == "none") return LSLU_PIVOT_NONE;
  if (name == "full") return LSLU_PIVOT_FULL;
  if (name == "sampled") return LSLU_PIVOT_SAMPLED;
  throw UsageError("unknown pivot strategy '" + name + "'");
}

lslu_lambda_rule parse_rule(const std::string& name) {
  if (name == "fixed") return LSLU_LAMBDA_FIXED;
  if (name == "gcv") return LSLU_LAMBDA_GCV;
  if (name == "wgcv") return LSLU_LAMBDA_WGCV;
  if (name == "optimal") return LSLU_LAMBDA_OPTIMAL;
  throw UsageError("unknown lambda rule '" + name + "'");
}

void validate(const RunConfig& c) {
  if (c.problem != "gravity" && c.problem != "tomo" && c.problem != "dense_file") {
    throw UsageError("unknown problem '" + c.problem + "'");
  }
  if (c.problem == "dense_file" && (c.matrix_file.empty() || c.vector_file.empty())) {
    throw UsageError("dense_file needs --matrix-file and --vector-file");
  }
  parse_method(c.method);
  parse_pivot(c.pivot);
  parse_rule(c.lambda_rule);
  for (const auto& m : c.methods) parse_method(m);
  for (const auto& e : c.emit) {
    if (!kEmitNames.count(e)) throw UsageError("unknown emit target '" + e + "'");
  }
  if (c.maxiter == 0) throw UsageError("maxiter must be at least 1");
  if (c.pivot == "sampled" && c.sample_size == 0) {
    throw UsageError("sampled pivoting needs --sample-size");
  }
}

ProblemPtr make_problem(const RunConfig& c) {
  lslu_problem* p = nullptr;
  if (c.problem == "gravity") {
    check(lslu_problem_gravity(c.n, c.depth, c.noise_level, c.seed, &p));
  } else if (c.problem == "tomo") {
    check(lslu_problem_tomo(c.grid, c.angles, c.detectors, c.noise_level, c.seed, &p));
  } else {
    check(lslu_problem_from_files(c.matrix_file.c_str(), c.vector_file.c_str(),
                                  c.truth_file.empty() ? nullptr : c.truth_file.c_str(),
                                  c.noise_level, c.seed, &p));
  }
  return ProblemPtr(p);
}

lslu_solver_options make_options(const RunConfig& c) {
  lslu_solver_options o;
  lslu_solver_options_init(&o);
  o.method = parse_method(c.method);
  o.maxiter = c.maxiter;
  o.pivot = parse_pivot(c.pivot);
  o.sample_size = c.sample_size;
  o.pivot_seed = c.pivot_seed;
  o.lambda_rule = parse_rule(c.lambda_rule);
  o.lambda = c.lambda;
  o.lambda_lo = c.lambda_lo;
  o.lambda_hi = c.lambda_hi;
  o.stop_tol = c.stop_tol;
  o.reorth = c.reorth ? 1 : 0;
  o.pure = c.pure ? 1 : 0;
  return o;
}

ResultPtr run_solver(const lslu_problem* p, const lslu_solver_options& o) {
  lslu_result* r = nullptr;
  check(lslu_solve(p, &o, &r));
  return ResultPtr(r);
}

lslu_summary summary_of(const lslu_result* r) {
  lslu_summary s;
  check(lslu_result_summary(r, &s));
  return s;
}

std::vector<double> history_of(const lslu_result* r, lslu_history which) {
  std::vector<double> h(summary_of(r).k_reached);
  check(lslu_result_history(r, which, h.data(), h.size()));
  return h;
}

std::pair<std::size_t, std::size_t> image_shape(const lslu_problem* p) {
  std::size_t rows = 0, cols = 0;
  check(lslu_problem_image_shape(p, &rows, &cols));
  return {rows, cols};
}

std::pair<std::size_t, std::size_t> dims(const lslu_problem* p) {
  std::size_t m = 0, n = 0;
  check(lslu_problem_dims(p, &m, &n));
  return {m, n};
}

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

json json_number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json problem_json(const RunConfig& c, const lslu_problem* p) {
  const auto [m, n] = dims(p);
  json j = {{"kind", c.problem}, {"m", m}, {"n", n}, {"noise_level", c.noise_level},
            {"seed", c.seed}};
  if (c.problem == "gravity") {
    j["depth"] = c.depth;
  } else if (c.problem == "tomo") {
    std::size_t angles = 0, detectors = 0;
    check(lslu_problem_data_shape(p, &angles, &detectors));
    j["grid"] = c.grid;
    j["angles"] = angles;
    j["detectors"] = detectors;
  }
  return j;
}

json result_json(const lslu_result* r) {
  const lslu_summary s = summary_of(r);
  return {{"method", lslu_method_name(s.method)},
          {"k_reached", s.k_reached},
          {"k_stop", s.k_stop},
          {"stop_reason", lslu_stop_reason_name(s.stop_reason)},
          {"beta", json_number(s.beta)},
          {"final_lambda", json_number(s.final_lambda)},
          {"final_relative_error", json_number(s.final_relative_error)}};
}

void write_json(const json& j, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw RuntimeError("cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw RuntimeError("write to '" + path.string() + "' failed");
}

void write_text(const std::string& text, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw RuntimeError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw RuntimeError("write to '" + path.string() + "' failed");
}

void write_pgm(const std::vector<double>& v, std::size_t rows, std::size_t cols,
               const fs::path& path) {
  check(lslu_write_pgm(v.data(), rows, cols, path.string().c_str()));
}

fs::path prepare_output(const RunConfig& c) {
  const fs::path dir(c.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw RuntimeError("cannot create output directory '" + c.output_dir + "'");
  return dir;
}

std::set<std::string> emit_set(const RunConfig& c, std::set<std::string> defaults) {
  if (c.emit.empty()) return defaults;
  return {c.emit.begin(), c.emit.end()};
}

std::string padded(std::size_t k) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02zu", k);
  return buf;
}

// ---- subcommands ----

int cmd_solve(const RunConfig& c) {
  const ProblemPtr problem = make_problem(c);
  const ResultPtr result = run_solver(problem.get(), make_options(c));
  const fs::path dir = prepare_output(c);
  const std::set<std::string> emit = emit_set(c, {"history_csv", "summary_json", "recon_pgm"});
  const auto [img_rows, img_cols] = image_shape(problem.get());
  const auto [m, n] = dims(problem.get());
  const lslu_summary s = summary_of(result.get());

  if (emit.count("history_csv")) {
    check(lslu_result_write_history_csv(result.get(), (dir / "history.csv").string().c_str()));
  }
  if (emit.count("recon_pgm") && img_rows > 0) {
    std::vector<double> x(n);
    check(lslu_result_final_solution(result.get(), x.data(), x.size()));
    write_pgm(x, img_rows, img_cols, dir / "recon.pgm");
  }
  if (emit.count("basis_pgm")) {
    if (img_rows == 0) {
      std::cerr << "basis_pgm skipped: problem has no image layout\n";
    } else {
      std::size_t data_rows = 0, data_cols = 0;
      check(lslu_problem_data_shape(problem.get(), &data_rows, &data_cols));
      const bool hessenberg =
          s.method == LSLU_METHOD_LSLU || s.method == LSLU_METHOD_HYBRID_LSLU;
      std::size_t sol_cols = 0, res_cols = 0;
      check(lslu_result_basis_columns(result.get(), LSLU_BASIS_SOLUTION, &sol_cols));
      check(lslu_result_basis_columns(result.get(), LSLU_BASIS_RESIDUAL, &res_cols));
      for (std::size_t k : c.basis_k) {
        if (k == 0) continue;
        if (k <= sol_cols) {
          std::vector<double> col(n);
          check(lslu_result_basis_column(result.get(), LSLU_BASIS_SOLUTION, k - 1, col.data(),
                                         col.size()));
          write_pgm(col, img_rows, img_cols,
                    dir / ("basis_" + std::string(hessenberg ? "L" : "V") + "_k" + padded(k) +
                           ".pgm"));
        }
        if (k <= res_cols && data_rows > 0) {
          std::vector<double> col(m);
          check(lslu_result_basis_column(result.get(), LSLU_BASIS_RESIDUAL, k - 1, col.data(),
                                         col.size()));
          write_pgm(col, data_rows, data_cols,
                    dir / ("basis_" + std::string(hessenberg ? "D" : "U") + "_k" + padded(k) +
                           ".pgm"));
        }
      }
    }
  }
  json summary = result_json(result.get());
  summary["schema"] = "lslu.summary/1";
  summary["command"] = "solve";
  summary["problem"] = problem_json(c, problem.get());
  if (emit.count("summary_json")) write_json(summary, dir / "summary.json");

  std::cout << lslu_method_name(s.method) << ": k_stop=" << s.k_stop
            << " stop_reason=" << lslu_stop_reason_name(s.stop_reason)
            << " lambda=" << number(s.final_lambda)
            << " relative_error=" << number(s.final_relative_error) << '\n';
  return 0;
}

struct Curve {
  std::string name;
  lslu_solver_options options;
};

int cmd_compare(const RunConfig& c) {
  const ProblemPtr problem = make_problem(c);
  if (!lslu_problem_has_truth(problem.get())) {
    throw UsageError("compare needs a problem with a known true solution");
  }
  std::vector<Curve> curves;
  for (const std::string& name : c.methods) {
    RunConfig member = c;
    member.method = name;
    member.pivot = "full";
    lslu_solver_options o = make_options(member);
    curves.push_back({name, o});
    const bool hessenberg = name == "lslu" || name == "hybrid_lslu";
    if (!hessenberg) continue;
    for (std::size_t size : c.sample_sizes) {
      o.pivot = LSLU_PIVOT_SAMPLED;
      o.sample_size = size;
      o.pivot_seed = c.pivot_seed;
      curves.push_back({name + "_sampled_" + std::to_string(size), o});
    }
  }

  std::vector<std::future<ResultPtr>> jobs;
  for (const Curve& curve : curves) {
    jobs.push_back(std::async(std::launch::async,
                              [&p = problem, o = curve.options] { return run_solver(p.get(), o); }));
  }
  std::vector<ResultPtr> results;
  for (auto& job : jobs) results.push_back(job.get());

  std::vector<std::vector<double>> errors;
  std::size_t rows = 0;
  for (const ResultPtr& r : results) {
    errors.push_back(history_of(r.get(), LSLU_HISTORY_RELATIVE_ERROR));
    rows = std::max(rows, errors.back().size());
  }
  std::ostringstream csv;
  csv << "# schema: lslu.compare/1\nk";
  for (const Curve& curve : curves) csv << ',' << curve.name;
  csv << '\n';
  for (std::size_t k = 1; k <= rows; ++k) {
    csv << k;
    for (const auto& e : errors) csv << ',' << (k <= e.size() ? number(e[k - 1]) : "");
    csv << '\n';
  }
  const fs::path dir = prepare_output(c);
  write_text(csv.str(), dir / "compare.csv");

  json members = json::array();
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& e = errors[i];
    std::size_t arg = 0;
    for (std::size_t k = 1; k < e.size(); ++k) {
      if (e[k] < e[arg]) arg = k;
    }
    json entry = result_json(results[i].get());
    entry["name"] = curves[i].name;
    entry["min_relative_error"] = e.empty() ? json(nullptr) : json_number(e[arg]);
    entry["argmin_k"] = e.empty() ? 0 : arg + 1;
    members.push_back(entry);
    std::cout << curves[i].name << ": min_relative_error="
              << (e.empty() ? "nan" : number(e[arg])) << " at k=" << (e.empty() ? 0 : arg + 1)
              << '\n';
  }
  json summary = {{"schema", "lslu.compare_summary/1"},
                  {"command", "compare"},
                  {"problem", problem_json(c, problem.get())},
                  {"curves", members}};
  if (emit_set(c, {"summary_json"}).count("summary_json")) {
    write_json(summary, dir / "summary.json");
  }
  return 0;
}

int cmd_bounds(const RunConfig& c) {
  const ProblemPtr problem = make_problem(c);
  const fs::path dir = prepare_output(c);
  const bool csv = emit_set(c, {"bounds_csv"}).count("bounds_csv") > 0;

  json reports = json::array();
  auto record = [&](lslu_bounds* raw, double lambda, const std::string& file) {
    const BoundsPtr bounds(raw);
    if (csv) check(lslu_bounds_write_csv(bounds.get(), (dir / file).string().c_str()));
    const bool ok = lslu_bounds_all_ok(bounds.get()) != 0;
    reports.push_back({{"lambda", lambda},
                       {"iterations", lslu_bounds_length(bounds.get())},
                       {"all_ok", ok},
                       {"file", file}});
    std::cout << "lambda=" << number(lambda) << " iterations=" << lslu_bounds_length(bounds.get())
              << " bounds " << (ok ? "hold" : "violated") << '\n';
  };

  lslu_bounds* raw = nullptr;
  check(lslu_bounds_unregularized(problem.get(), c.maxiter, &raw));
  record(raw, 0.0, "bounds.csv");
  for (std::size_t i = 0; i < c.bounds_lambdas.size(); ++i) {
    raw = nullptr;
    check(lslu_bounds_regularized(problem.get(), c.bounds_lambdas[i], c.maxiter, &raw));
    record(raw, c.bounds_lambdas[i], "bounds_reg" + std::to_string(i + 1) + ".csv");
  }
  json summary = {{"schema", "lslu.bounds_summary/1"},
                  {"command", "bounds"},
                  {"problem", problem_json(c, problem.get())},
                  {"reports", reports}};
  if (emit_set(c, {"summary_json"}).count("summary_json")) {
    write_json(summary, dir / "summary.json");
  }
  return 0;
}

int cmd_uq(const RunConfig& c) {
  const ProblemPtr problem = make_problem(c);
  const auto [m, n] = dims(problem.get());
  const auto [img_rows, img_cols] = image_shape(problem.get());

  double sigma2 = c.sigma2;
  if (!(sigma2 > 0.0)) check(lslu_problem_noise_variance(problem.get(), &sigma2));
  if (!(sigma2 > 0.0)) throw UsageError("noise variance is zero; pass --sigma2");

  // reg defaults to the Hybrid LSQR wGCV lambda at its stopping iteration;
  // the variance images use the Hybrid LSLU stopping iteration.
  RunConfig hybrid = c;
  hybrid.lambda_rule = "wgcv";
  hybrid.method = "hybrid_lsqr";
  const ResultPtr lsqr_run = run_solver(problem.get(), make_options(hybrid));
  hybrid.method = "hybrid_lslu";
  const ResultPtr lslu_run = run_solver(problem.get(), make_options(hybrid));
  const double reg = c.reg > 0.0 ? c.reg : summary_of(lsqr_run.get()).final_lambda;
  if (!(reg > 0.0)) throw RuntimeError("could not determine reg; pass --reg");

  RunConfig factor = c;
  factor.maxiter = c.k_max;
  factor.stop_tol = 0.0;
  factor.lambda_rule = "fixed";
  factor.lambda = 0.0;
  factor.method = "lslu";
  const ResultPtr lu = run_solver(problem.get(), make_options(factor));
  factor.method = "lsqr";
  const ResultPtr qr = run_solver(problem.get(), make_options(factor));
  const std::size_t k_reached =
      std::min(summary_of(lu.get()).k_reached, summary_of(qr.get()).k_reached);

  auto build = [&](const lslu_result* r, std::size_t k) {
    lslu_uq* raw = nullptr;
    check(lslu_uq_build(r, k, sigma2, reg, &raw));
    return UqPtr(raw);
  };

  std::ostringstream csv;
  csv << "# schema: lslu.uq/1\nk,sum_lslu,sum_lsqr,abs_diff\n";
  for (std::size_t k = 1; k <= k_reached; ++k) {
    double a = 0.0, b = 0.0;
    check(lslu_uq_covariance_sum(build(lu.get(), k).get(), &a));
    check(lslu_uq_covariance_sum(build(qr.get(), k).get(), &b));
    csv << k << ',' << number(a) << ',' << number(b) << ',' << number(std::abs(a - b)) << '\n';
  }
  const fs::path dir = prepare_output(c);
  const std::set<std::string> emit = emit_set(c, {"uq_csv", "summary_json", "recon_pgm"});
  if (emit.count("uq_csv")) write_text(csv.str(), dir / "uq.csv");

  const std::size_t k_image =
      std::max<std::size_t>(1, std::min(summary_of(lslu_run.get()).k_stop, k_reached));
  if (emit.count("recon_pgm") && img_rows > 0 && k_reached > 0) {
    for (const auto& [name, r] : {std::pair{"lslu", lu.get()}, std::pair{"lsqr", qr.get()}}) {
      std::vector<double> var(n);
      check(lslu_uq_variance(build(r, k_image).get(), var.data(), var.size()));
      write_pgm(var, img_rows, img_cols, dir / ("variance_" + std::string(name) + ".pgm"));
    }
  }
  json summary = {{"schema", "lslu.uq_summary/1"},
                  {"command", "uq"},
                  {"problem", problem_json(c, problem.get())},
                  {"sigma2", sigma2},
                  {"reg", reg},
                  {"k_max", k_reached},
                  {"k_image", k_image},
                  {"hybrid_lslu", result_json(lslu_run.get())},
                  {"hybrid_lsqr", result_json(lsqr_run.get())}};
  if (emit.count("summary_json")) write_json(summary, dir / "summary.json");
  std::cout << "uq: k_max=" << k_reached << " sigma2=" << number(sigma2)
            << " reg=" << number(reg) << '\n';
  (void)m;
  return 0;
}

// Options common to every subcommand, bound to the config fields.
void add_common(CLI::App* app, RunConfig& c, std::string& config_path) {
  app->add_option("--config", config_path, "JSON file with RunConfig fields");
  app->add_option("--problem", c.problem, "gravity | tomo | dense_file");
  app->add_option("--n", c.n, "gravity grid size");
  app->add_option("--depth", c.depth, "gravity source depth");
  app->add_option("--grid", c.grid, "tomography image size N (N x N)");
  app->add_option("--angles", c.angles, "tomography angles (0: N)");
  app->add_option("--detectors", c.detectors, "tomography detectors (0: ceil(sqrt(2) N))");
  app->add_option("--matrix-file", c.matrix_file, "dense_file matrix, one row per line");
  app->add_option("--vector-file", c.vector_file, "dense_file data vector");
  app->add_option("--truth-file", c.truth_file, "dense_file true solution (optional)");
  app->add_option("--noise-level", c.noise_level, "||e|| / ||b_exact||");
  app->add_option("--seed", c.seed, "noise seed");
  app->add_option("--method", c.method, "lslu | hybrid_lslu | lsqr | hybrid_lsqr");
  app->add_option("--maxiter", c.maxiter, "iteration limit");
  app->add_option("--lambda-rule", c.lambda_rule, "fixed | gcv | wgcv | optimal");
  app->add_option("--lambda", c.lambda, "lambda for the fixed rule");
  app->add_option("--lambda-lo", c.lambda_lo, "lower end of the lambda search window");
  app->add_option("--lambda-hi", c.lambda_hi, "upper end of the lambda search window");
  app->add_option("--stop-tol", c.stop_tol, "stopping tolerance (<= 0 disables)");
  app->add_option("--pivot", c.pivot, "none | full | sampled");
  app->add_option("--sample-size", c.sample_size, "sampled pivoting sample size");
  app->add_option("--pivot-seed", c.pivot_seed, "sampled pivoting seed");
  app->add_option("--reorth", c.reorth, "reorthogonalize Golub-Kahan vectors");
  app->add_option("--pure", c.pure, "skip full-length norms during the iteration");
  app->add_option("--output-dir", c.output_dir, "directory for output files");
  app->add_option("--emit", c.emit, "history_csv summary_json recon_pgm basis_pgm bounds_csv uq_csv");
}

std::string find_config_path(int argc, char** argv) {
  std::string path;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config") {
      if (i + 1 >= argc) throw UsageError("--config needs a path");
      path = argv[i + 1];
    } else if (arg.rfind("--config=", 0) == 0) {
      path = arg.substr(9);
    }
  }
  return path;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig config;
  std::string config_path;
  try {
    config_path = find_config_path(argc, argv);
    if (!config_path.empty()) load_config_file(config_path, config);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App app{"Inner-product-free Krylov solvers for linear inverse problems"};
  app.require_subcommand(1);
  auto* solve = app.add_subcommand("solve", "Run one solver and write its history");
  add_common(solve, config, config_path);
  solve->add_option("--basis-k", config.basis_k, "basis columns exported by basis_pgm");

  auto* compare = app.add_subcommand("compare", "Error curves for several solvers");
  add_common(compare, config, config_path);
  compare->add_option("--methods", config.methods, "methods to compare");
  compare->add_option("--sample-sizes", config.sample_sizes, "sampled pivoting sizes");

  auto* uq = app.add_subcommand("uq", "Posterior covariance from both factorizations");
  add_common(uq, config, config_path);
  uq->add_option("--k-max", config.k_max, "largest basis size");
  uq->add_option("--reg", config.reg, "prior weight (default: Hybrid LSQR wGCV lambda)");
  uq->add_option("--sigma2", config.sigma2, "noise variance (default: from the problem)");

  auto* bounds = app.add_subcommand("bounds", "Residual bound reports");
  add_common(bounds, config, config_path);
  bounds->add_option("--bounds-lambdas", config.bounds_lambdas, "lambdas for the regularized report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    validate(config);
    if (solve->parsed()) return cmd_solve(config);
    if (compare->parsed()) return cmd_compare(config);
    if (uq->parsed()) return cmd_uq(config);
    if (bounds->parsed()) return cmd_bounds(config);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
