/*
 * Copyright 2026 The nica Authors
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

#include "nica/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace nica {

json matrix_to_json(const Matrix& m) {
  json arr = json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) arr.push_back(m(i, j));
  return arr;
}

Matrix matrix_from_json(const json& j, Index rows, Index cols) {
  require(j.is_array() && static_cast<Index>(j.size()) == rows * cols,
          "expected a row-major array of " + std::to_string(rows * cols) + " numbers");
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index c = 0; c < cols; ++c) m(i, c) = j.at(static_cast<std::size_t>(i * cols + c)).get<double>();
  return m;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Vector vector_from_json(const json& j, Index size) {
  require(j.is_array() && static_cast<Index>(j.size()) == size,
          "expected an array of " + std::to_string(size) + " numbers");
  Vector v(size);
  for (Index i = 0; i < size; ++i) v(i) = j.at(static_cast<std::size_t>(i)).get<double>();
  return v;
}

json ground_truth_to_json(const GroundTruth& gt) {
  return json{{"n", gt.n},
              {"A", matrix_to_json(gt.A)},
              {"Sigma", matrix_to_json(gt.Sigma)},
              {"source", to_string(gt.source)}};
}

GroundTruth ground_truth_from_json(const json& j) {
  try {
    GroundTruth gt;
    gt.n = j.at("n").get<Index>();
    require(gt.n >= 1, "ground truth: n must be positive");
    gt.A = matrix_from_json(j.at("A"), gt.n, gt.n);
    gt.Sigma = matrix_from_json(j.at("Sigma"), gt.n, gt.n);
    gt.source = parse_source(j.at("source").get<std::string>());
    gt.validate_and_clean();
    return gt;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("ground truth JSON: ") + e.what());
  }
}

void write_samples_csv(std::ostream& out, const SampleSet& s) {
  out << "n=" << s.dim() << ",pairs=" << s.pairs() << "\n";
  char buf[32];
  auto row = [&](const auto& col) {
    for (Index k = 0; k < col.size(); ++k) {
      if (k) out << ',';
      auto res = std::to_chars(buf, buf + sizeof(buf), col(k));
      out.write(buf, res.ptr - buf);
    }
    out << '\n';
  };
  for (Index i = 0; i < s.pairs(); ++i) {
    row(s.y(i));
    row(s.y_prime(i));
  }
}

SampleSet read_samples_csv(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), "samples CSV: missing header");
  long long n = 0, pairs = 0;
  if (std::sscanf(line.c_str(), "n=%lld,pairs=%lld", &n, &pairs) != 2)
    throw InvalidArgument("samples CSV: header must read 'n=<n>,pairs=<N>'");
  require(n >= 1 && pairs >= 1, "samples CSV: n and pairs must be positive");

  Matrix first(n, pairs), second(n, pairs);
  for (long long r = 0; r < 2 * pairs; ++r) {
    require(static_cast<bool>(std::getline(in, line)),
            "samples CSV: expected " + std::to_string(2 * pairs) + " data rows, got " + std::to_string(r));
    Matrix& target = (r % 2 == 0) ? first : second;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (long long k = 0; k < n; ++k) {
      double v = 0.0;
      auto res = std::from_chars(p, end, v);
      require(res.ec == std::errc(), "samples CSV: malformed number on data row " + std::to_string(r + 1));
      target(k, r / 2) = v;
      p = res.ptr;
      if (k + 1 < n) {
        require(p < end && *p == ',', "samples CSV: expected " + std::to_string(n) + " values on data row " +
                                          std::to_string(r + 1));
        ++p;
      }
    }
    while (p < end && (*p == '\r' || *p == ' ')) ++p;
    require(p == end, "samples CSV: too many values on data row " + std::to_string(r + 1));
  }
  return SampleSet(std::move(first), std::move(second));
}

json recovered_to_json(const RecoveredModel& m) {
  return json{{"n", m.n()},
              {"A_hat", matrix_to_json(m.A_hat)},
              {"Sigma_hat", matrix_to_json(m.Sigma_hat)},
              {"R_hat", matrix_to_json(m.R_hat)},
              {"D_hat", vector_to_json(m.D_hat)},
              {"diagnostics",
               {{"r_orthogonality", m.diagnostics.r_orthogonality},
                {"sigma_min_eig", m.diagnostics.sigma_min_eig},
                {"floored_eigs", m.diagnostics.floored_eigs}}}};
}

RecoveredModel recovered_from_json(const json& j) {
  try {
    RecoveredModel m;
    const Index n = j.at("n").get<Index>();
    require(n >= 1, "recovered model: n must be positive");
    m.A_hat = matrix_from_json(j.at("A_hat"), n, n);
    m.Sigma_hat = matrix_from_json(j.at("Sigma_hat"), n, n);
    m.R_hat = matrix_from_json(j.at("R_hat"), n, n);
    m.D_hat = vector_from_json(j.at("D_hat"), n);
    if (j.contains("diagnostics")) {
      const json& d = j.at("diagnostics");
      m.diagnostics.r_orthogonality = d.value("r_orthogonality", 0.0);
      m.diagnostics.sigma_min_eig = d.value("sigma_min_eig", 0.0);
      m.diagnostics.floored_eigs = d.value("floored_eigs", Index{0});
    }
    return m;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("recovered model JSON: ") + e.what());
  }
}

EvaluationReport evaluate_recovery(const RecoveredModel& est, const GroundTruth& truth) {
  require(est.n() == truth.n, "evaluate_recovery: dimension mismatch");
  EvaluationReport r;
  r.match = match_columns(est.A_hat, truth.A);
  r.frob_error_A = r.match.frob_error;
  r.relative_error_A = r.frob_error_A / truth.A.norm();
  r.frob_error_Sigma = sigma_error(est.Sigma_hat, truth.Sigma);
  return r;
}

json report_to_json(const EvaluationReport& r) {
  json perm = json::array();
  for (Index p : r.match.permutation) perm.push_back(p);
  return json{{"frob_error_A", r.frob_error_A},
              {"relative_error_A", r.relative_error_A},
              {"frob_error_Sigma", r.frob_error_Sigma},
              {"permutation", perm},
              {"signs", r.match.signs},
              {"per_column_errors", r.match.per_column_errors}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument("'" + path + "': " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

GroundTruth read_ground_truth(const std::string& path) { return ground_truth_from_json(read_json_file(path)); }

SampleSet read_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  return read_samples_csv(in);
}

void write_samples(const std::string& path, const SampleSet& s) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  write_samples_csv(out, s);
}

}  // namespace nica
