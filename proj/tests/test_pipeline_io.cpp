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
#include "nica/pipeline.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "oracles.hpp"

namespace nica {
namespace {

TEST(Config, DefaultsAreValid) {
  const PipelineConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_GE(cfg.params_proj.delta, 10.0 * cfg.params_full.delta);
}

TEST(Config, DeltaRatioViolationNamesTheCondition) {
  json j = {{"params_full", {{"delta", 1e-6}}}, {"params_proj", {{"delta", 2e-6}}}};
  try {
    config_from_json(j);
    FAIL() << "expected rejection";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("delta' >= 10 * delta"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("(2e-06)"), std::string::npos) << e.what();
  }
}

TEST(Config, RoundTripAndUnknownSolver) {
  PipelineConfig cfg;
  cfg.seed = 17;
  cfg.params_full.solver = StepSolver::ExactTrustRegion;
  cfg.strict_params = true;
  cfg.threads = 2;
  cfg.source = SourceDistribution::UniformSymmetric;
  const PipelineConfig back = config_from_json(config_to_json(cfg));
  EXPECT_EQ(config_to_json(back), config_to_json(cfg));
  EXPECT_THROW(config_from_json(json{{"params_full", {{"solver", "lbfgs"}}}}), InvalidArgument);
  EXPECT_THROW(config_from_json(json::array()), InvalidArgument);
  EXPECT_THROW(config_from_json(json{{"seed", "seven"}}), InvalidArgument);
  EXPECT_THROW(config_from_json(json{{"source", "laplace"}}), InvalidArgument);
}

TEST(StrictParameters, FollowTheRule) {
  const auto [full, proj] = strict_parameters(1.0, 2.0, 4, 1e-2, 10);
  const double r = 0.5;
  EXPECT_DOUBLE_EQ(proj.beta, r * r / 4.0);
  EXPECT_DOUBLE_EQ(full.beta, std::min(1e-2 / 2.0, std::pow(r, 4) * std::pow(4.0, -3.5)));
  EXPECT_DOUBLE_EQ(full.delta, full.beta * full.beta / 400.0);
  EXPECT_DOUBLE_EQ(proj.delta, proj.beta * proj.beta / 400.0);
  EXPECT_GE(proj.delta, 10.0 * full.delta);
  EXPECT_GE(static_cast<double>(full.max_iters), 20.0 / full.beta);
  EXPECT_THROW(strict_parameters(2.0, 1.0, 4, 1e-2, 10), InvalidArgument);
}

TEST(Json, MatrixRoundTripIsRowMajor) {
  Matrix m(2, 3);
  m << 1, 2, 3, 4, 5, 6;
  const json j = matrix_to_json(m);
  EXPECT_EQ(j[1].get<double>(), 2.0);
  EXPECT_EQ(matrix_from_json(j, 2, 3), m);
  EXPECT_THROW(matrix_from_json(j, 3, 3), InvalidArgument);
}

TEST(Json, GroundTruthRoundTrip) {
  const GroundTruth gt = make_ground_truth(4, 3.0, 0.5, SourceDistribution::UniformSymmetric, 8);
  const GroundTruth back = ground_truth_from_json(json::parse(ground_truth_to_json(gt).dump()));
  EXPECT_EQ(back.A, gt.A);
  EXPECT_EQ(back.Sigma, gt.Sigma);
  EXPECT_EQ(back.source, gt.source);
  json bad = ground_truth_to_json(gt);
  bad["n"] = 3;
  EXPECT_THROW(ground_truth_from_json(bad), InvalidArgument);
}

TEST(Csv, RoundTripIsExact) {
  const GroundTruth gt = make_ground_truth(3, 2.0, 0.5, SourceDistribution::Rademacher, 1);
  const SampleSet s = sample_dataset(gt, 200, 2);
  std::stringstream buf;
  write_samples_csv(buf, s);
  const SampleSet back = read_samples_csv(buf);
  EXPECT_EQ(back.first(), s.first());
  EXPECT_EQ(back.second(), s.second());
}

TEST(Csv, MalformedInputsAreRejected) {
  std::stringstream a("n=2,pairs=1\n1,2\n");
  EXPECT_THROW(read_samples_csv(a), InvalidArgument);
  std::stringstream b("n=2,pairs=1\n1,2\n3\n");
  EXPECT_THROW(read_samples_csv(b), InvalidArgument);
  std::stringstream c("n=2,pairs=1\n1,2\n3,4,5\n");
  EXPECT_THROW(read_samples_csv(c), InvalidArgument);
  std::stringstream d("dim=2\n");
  EXPECT_THROW(read_samples_csv(d), InvalidArgument);
  std::stringstream e("n=2,pairs=1\n1,x\n3,4\n");
  EXPECT_THROW(read_samples_csv(e), InvalidArgument);
}

TEST(Report, FieldsPresent) {
  const GroundTruth gt = make_ground_truth(3, 2.0, 0.5, SourceDistribution::Rademacher, 1);
  RecoveredModel m;
  m.A_hat = gt.A;
  m.Sigma_hat = gt.Sigma + 0.1 * Matrix::Identity(3, 3);
  m.R_hat = Matrix::Identity(3, 3);
  m.D_hat = Vector::Ones(3);
  const RecoveredModel back = recovered_from_json(json::parse(recovered_to_json(m).dump()));
  const json r = report_to_json(evaluate_recovery(back, gt));
  for (const char* key : {"frob_error_A", "relative_error_A", "frob_error_Sigma", "permutation", "signs",
                          "per_column_errors"})
    EXPECT_TRUE(r.contains(key)) << key;
  EXPECT_NEAR(r["frob_error_A"].get<double>(), 0.0, 1e-15);
  EXPECT_NEAR(r["frob_error_Sigma"].get<double>(), 0.1 * std::sqrt(3.0), 1e-12);
}

TEST(Pipeline, NoiselessIdentityModel) {
  GroundTruth gt;
  gt.n = 3;
  gt.A = Matrix::Identity(3, 3);
  gt.Sigma = Matrix::Zero(3, 3);
  const SampleSet s = sample_dataset(gt, 500000, 1);
  PipelineConfig cfg;
  cfg.seed = 1;
  std::vector<json> events;
  const PipelineResult r = run_pipeline(s, cfg, [&](const json& j) { events.push_back(j); });
  const EvaluationReport rep = evaluate_recovery(r.model, gt);
  EXPECT_LE(rep.relative_error_A, 0.15);
  EXPECT_LE(rep.frob_error_Sigma, 0.15);
  ASSERT_FALSE(events.empty());
  EXPECT_EQ(events.front()["stage"], "input");
  EXPECT_EQ(events.back()["stage"], "recover");
}

TEST(Pipeline, UniformSourcesRecoverScale) {
  GroundTruth gt;
  gt.n = 3;
  gt.A = Matrix::Identity(3, 3);
  gt.Sigma = Matrix::Zero(3, 3);
  gt.source = SourceDistribution::UniformSymmetric;
  const SampleSet s = sample_dataset(gt, 500000, 6);
  PipelineConfig cfg;
  cfg.seed = 1;
  cfg.source = gt.source;
  const EvaluationReport rep = evaluate_recovery(run_pipeline(s, cfg).model, gt);
  // The Rademacher scale would leave a relative error near 1 - 0.6^1/4 = 0.12.
  EXPECT_LE(rep.relative_error_A, 0.05);
}

TEST(Pipeline, DeterministicResultJson) {
  const GroundTruth gt = make_ground_truth(3, 2.0, 0.5, SourceDistribution::Rademacher, 2);
  const SampleSet s = sample_dataset(gt, 100000, 2);
  PipelineConfig cfg;
  cfg.seed = 4;
  cfg.threads = 1;
  const std::string a = result_to_json(run_pipeline(s, cfg)).dump();
  cfg.threads = 3;
  const std::string b = result_to_json(run_pipeline(s, cfg)).dump();
  EXPECT_EQ(a, b);
}

TEST(Pipeline, StrictParametersRun) {
  GroundTruth gt;
  gt.n = 2;
  gt.A = Matrix::Identity(2, 2);
  gt.Sigma = Matrix::Zero(2, 2);
  PipelineConfig cfg;
  cfg.seed = 3;
  cfg.strict_params = true;
  const PipelineResult r = run_pipeline(sample_dataset(gt, 50000, 3), cfg);
  ASSERT_TRUE(r.strict.has_value());
  EXPECT_LT(r.strict->first.beta, cfg.params_full.beta);
  EXPECT_LE(evaluate_recovery(r.model, gt).relative_error_A, 0.15);
}

TEST(Pipeline, StageLabelledErrors) {
  const SampleSet one_dim(Matrix::Ones(1, 10), Matrix::Ones(1, 10));
  try {
    run_pipeline(one_dim, PipelineConfig{});
    FAIL() << "expected a pipeline error";
  } catch (const PipelineError& e) {
    EXPECT_EQ(e.stage(), "input");
  }
  // With y' = 0 the objective is -mean (u.y)^4, whose Hessian is negative
  // definite for spread-out y.
  auto gen = make_stream(1, "flat");
  const SampleSet flat(oracle::gaussian_matrix(3, 50, gen), Matrix::Zero(3, 50));
  try {
    run_pipeline(flat, PipelineConfig{});
    FAIL() << "expected a pipeline error";
  } catch (const PipelineError& e) {
    EXPECT_EQ(e.stage(), "quasi_whiten");
  }
}

TEST(Files, JsonAndCsvHelpers) {
  const auto dir = std::filesystem::temp_directory_path() / "nica_io_test";
  std::filesystem::create_directories(dir);
  const GroundTruth gt = make_ground_truth(2, 2.0, 0.5, SourceDistribution::Rademacher, 3);
  write_json_file((dir / "m.json").string(), ground_truth_to_json(gt));
  EXPECT_EQ(read_ground_truth((dir / "m.json").string()).A, gt.A);
  const SampleSet s = sample_dataset(gt, 10, 3);
  write_samples((dir / "d.csv").string(), s);
  EXPECT_EQ(read_samples((dir / "d.csv").string()).first(), s.first());
  EXPECT_THROW(read_json_file((dir / "missing.json").string()), InvalidArgument);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace nica
