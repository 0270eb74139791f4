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

#include "nica/allopt.hpp"
#include "nica/io.hpp"
#include "nica/quasiwhiten.hpp"
#include "nica/recover.hpp"

#include <functional>
#include <optional>
#include <string>

namespace nica {

struct PipelineConfig {
  std::uint64_t seed = 0;  // root of the u0 and nudge streams
  Index n_pairs = 0;       // sample budget used by bench; run reads it from the data
  double eig_floor_ratio = 1e-8;
  LocalSearchParams params_full{1e-2, 1e-8, 100000, StepSolver::CandidateSet};
  LocalSearchParams params_proj{5e-2, 1e-7, 100000, StepSolver::CandidateSet};
  bool strict_params = false;
  double strict_gamma = 1e-2;  // target accuracy used by the strict parameter rule
  SourceDistribution source = SourceDistribution::Rademacher;  // sets the recovery scale
  bool paper_literal_constant = false;
  bool psd_project = false;
  bool deterministic_parallel = true;
  unsigned threads = 0;

  /// Rejects configurations that violate delta' >= 10 delta, among others.
  void validate() const;
  ReductionOptions reduction() const { return {deterministic_parallel, threads}; }
};

json config_to_json(const PipelineConfig& cfg);
/// Missing keys keep their defaults; the result is validated.
PipelineConfig config_from_json(const json& j);

/// Search parameters derived from the weight ratio r = d_min / d_max:
/// beta' = r^2 / 4, beta = min(gamma / sqrt(n), r^4 n^-3.5),
/// delta = d_min beta^2 / (100 n), delta' = d_min beta'^2 / (100 n).
std::pair<LocalSearchParams, LocalSearchParams> strict_parameters(double d_min, double d_max, Index n,
                                                                  double gamma, Index max_iters);

/// A failure inside one pipeline stage.
class PipelineError : public ModelError {
 public:
  PipelineError(std::string stage, const std::string& what)
      : ModelError("stage '" + stage + "': " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct PipelineResult {
  QuasiWhitening whitening;
  MaximaSet maxima;
  RecoveredModel model;
  MeanCheck mean_check;
  std::optional<std::pair<LocalSearchParams, LocalSearchParams>> strict;
};

using ProgressSink = std::function<void(const json&)>;

/// u0 draw, Hessian estimate, factorization, whitened objective, AllOPT on
/// the whitened objective, and recovery of A and Sigma.
PipelineResult run_pipeline(const SampleSet& data, const PipelineConfig& cfg, const ProgressSink& progress = {});

/// Recovered model JSON plus the quasi-whitening and per-maximum summaries.
json result_to_json(const PipelineResult& r);

}  // namespace nica
