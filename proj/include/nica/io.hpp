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

#pragma once

#include "nica/evalmatch.hpp"
#include "nica/model.hpp"
#include "nica/recover.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace nica {

using json = nlohmann::json;

json matrix_to_json(const Matrix& m);  // row-major flat array
Matrix matrix_from_json(const json& j, Index rows, Index cols);
json vector_to_json(const Vector& v);
Vector vector_from_json(const json& j, Index size);

/// {"n", "A", "Sigma", "source"} with row-major matrices.
json ground_truth_to_json(const GroundTruth& gt);
GroundTruth ground_truth_from_json(const json& j);

/// Header "n=<n>,pairs=<N>" followed by 2N rows; rows 2i-1 and 2i form pair i.
void write_samples_csv(std::ostream& out, const SampleSet& s);
SampleSet read_samples_csv(std::istream& in);

/// {"n", "A_hat", "Sigma_hat", "R_hat", "D_hat", "diagnostics": {...}}.
json recovered_to_json(const RecoveredModel& m);
RecoveredModel recovered_from_json(const json& j);

struct EvaluationReport {
  double frob_error_A = 0.0;
  double relative_error_A = 0.0;  // frob_error_A / |A|_F
  double frob_error_Sigma = 0.0;
  MatchResult match;
};

EvaluationReport evaluate_recovery(const RecoveredModel& est, const GroundTruth& truth);
json report_to_json(const EvaluationReport& r);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);
GroundTruth read_ground_truth(const std::string& path);
SampleSet read_samples(const std::string& path);
void write_samples(const std::string& path, const SampleSet& s);

}  // namespace nica
