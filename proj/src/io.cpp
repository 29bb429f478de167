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

#include "lslu/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include "lslu/error.hpp"

namespace lslu::io {

namespace {

std::ofstream open_output(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) fail(ErrorCode::io, "cannot open '" + path + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) fail(ErrorCode::io, "write to '" + path + "' failed");
}

std::vector<double> parse_numbers(const std::string& line, const std::string& path) {
  std::vector<double> values;
  std::istringstream in(line);
  std::string token;
  while (in >> token) {
    double v = 0.0;
    const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || end != token.data() + token.size()) {
      fail(ErrorCode::io, "'" + path + "': cannot parse '" + token + "' as a number");
    }
    values.push_back(v);
  }
  return values;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

void write_history_csv(const SolveResult& result, const std::string& path) {
  std::ofstream out = open_output(path);
  out << kHistorySchema << '\n' << "k,residual_norm,relative_error,lambda,ghat\n";
  for (Index k = 1; k <= result.k_reached; ++k) {
    const auto i = static_cast<std::size_t>(k - 1);
    out << k << ',' << format_double(result.residual_norm[i]) << ','
        << format_double(result.relative_error[i]) << ',' << format_double(result.lambda[i])
        << ',' << format_double(result.ghat[i]) << '\n';
  }
  finish(out, path);
}

void write_bounds_csv(const BoundReport& report, const std::string& path) {
  std::ofstream out = open_output(path);
  out << kBoundsSchema << '\n' << "k,lambda,r_lu,r_qr,kappa,lower_ok,upper_ok\n";
  for (const BoundRow& row : report.rows) {
    out << row.k << ',' << format_double(report.lambda) << ',' << format_double(row.r_lu) << ','
        << format_double(row.r_qr) << ',' << format_double(row.kappa) << ','
        << (row.lower_ok ? 1 : 0) << ',' << (row.upper_ok ? 1 : 0) << '\n';
  }
  finish(out, path);
}

void write_pgm(std::span<const double> values, Index rows, Index cols,
               const std::string& path) {
  require(rows >= 1 && cols >= 1, "write_pgm: empty image");
  require(static_cast<Index>(values.size()) == rows * cols,
          "write_pgm: value count does not match the image shape");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : values) {
    if (!std::isfinite(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::string pixels(values.size(), '\0');
  if (hi > lo) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double v = values[i];
      if (!std::isfinite(v)) continue;
      pixels[i] = static_cast<char>(static_cast<unsigned char>(
          std::lround(255.0 * (v - lo) / (hi - lo))));
    }
  }
  std::ofstream out = open_output(path, std::ios::out | std::ios::binary);
  out << "P5\n" << cols << ' ' << rows << "\n255\n";
  out.write(pixels.data(), static_cast<std::streamsize>(pixels.size()));
  finish(out, path);
}

MatrixXd read_matrix_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    rows.push_back(parse_numbers(line, path));
    if (rows.back().size() != rows.front().size()) {
      fail(ErrorCode::io, "'" + path + "': rows have different lengths");
    }
  }
  if (rows.empty() || rows.front().empty()) fail(ErrorCode::io, "'" + path + "' holds no matrix");
  MatrixXd M(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) {
      M(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return M;
}

VectorXd read_vector_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open '" + path + "'");
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const std::vector<double> part = parse_numbers(line, path);
    values.insert(values.end(), part.begin(), part.end());
  }
  if (values.empty()) fail(ErrorCode::io, "'" + path + "' holds no values");
  return Eigen::Map<const VectorXd>(values.data(), static_cast<Index>(values.size()));
}

void write_matrix_text(const MatrixXd& M, const std::string& path) {
  std::ofstream out = open_output(path);
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) {
      if (j > 0) out << ' ';
      out << format_double(M(i, j));
    }
    out << '\n';
  }
  finish(out, path);
}

}  // namespace lslu::io
