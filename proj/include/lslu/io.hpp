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

#include <span>
#include <string>

#include "lslu/diagnostics.hpp"
#include "lslu/solvers.hpp"

namespace lslu::io {

/// Shortest round-trip decimal form; "nan", "inf", "-inf" otherwise.
std::string format_double(double v);

/// Columns: k,residual_norm,relative_error,lambda,ghat.
void write_history_csv(const SolveResult& result, const std::string& path);
/// Columns: k,lambda,r_lu,r_qr,kappa,lower_ok,upper_ok.
void write_bounds_csv(const BoundReport& report, const std::string& path);

/// Binary P5 PGM, min-max scaled to 0..255. values is row-major rows x cols.
void write_pgm(std::span<const double> values, Index rows, Index cols,
               const std::string& path);

MatrixXd read_matrix_text(const std::string& path);
VectorXd read_vector_text(const std::string& path);
void write_matrix_text(const MatrixXd& M, const std::string& path);

inline constexpr const char* kHistorySchema = "# schema: lslu.history/1";
inline constexpr const char* kBoundsSchema = "# schema: lslu.bounds/1";

}  // namespace lslu::io
