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

#include "nica/recover.hpp"

#include <gtest/gtest.h>

#include "nica/evalmatch.hpp"
#include "oracles.hpp"

namespace nica {
namespace {

struct ExactChain {
  QuasiWhitening q;
  QuarticObjective white;
  Matrix R;
  Vector D;
};

// Expectation-limit chain: H = A D A^T, B B^T = H, whitened population
// objective, and R = B^-1 A D^1/2.
ExactChain exact_chain(const GroundTruth& gt, std::uint64_t u0_seed) {
  const Vector u0 = pick_u0(gt.n, u0_seed);
  const Vector D = diag_weights(gt.A, u0, source_kurtosis(gt.source));
  const PsdFactor f = factor_psd(gt.A * D.asDiagonal() * gt.A.transpose());
  QuasiWhitening q{u0, f.floored, f.B, f.B_inv, false, 0};
  QuarticObjective white = population_objective(f.B_inv * gt.A, source_kurtosis(gt.source));
  return {q, std::move(white), f.B_inv * gt.A * D.cwiseSqrt().asDiagonal(), D};
}

TEST(EstimateCov, SingleSample) {
  Matrix y = Vector::Unit(3, 0);
  const SampleSet s(y, y);
  EXPECT_EQ(estimate_cov(s), Vector::Unit(3, 0) * Vector::Unit(3, 0).transpose());
}

TEST(EstimateCov, MatchesModelCovariance) {
  GroundTruth gt;
  gt.n = 2;
  gt.A = Matrix::Identity(2, 2);
  gt.Sigma = Matrix::Identity(2, 2);
  const Matrix C = estimate_cov(sample_dataset(gt, 100000, 1));
  EXPECT_LE((C - 2.0 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 0.05);
}

TEST(Recover, ConstantInExactLimit) {
  const GroundTruth gt = make_ground_truth(3, 2.0, 0.0, SourceDistribution::Rademacher, 2);
  const ExactChain c = exact_chain(gt, 5);
  EXPECT_LE((c.R.transpose() * c.R - Matrix::Identity(3, 3)).norm(), 1e-10);
  const RecoveredModel m = recover_model(c.q, c.white, c.R, Matrix(gt.A * gt.A.transpose()));
  for (Index i = 0; i < 3; ++i) EXPECT_NEAR(m.D_hat(i) / c.D(i), 1.0, 1e-6);
  EXPECT_LE((m.A_hat - gt.A).norm(), 1e-8);
  EXPECT_LE(m.Sigma_hat.norm(), 1e-8);
  EXPECT_LE(m.diagnostics.r_orthogonality, 1e-10);
}

TEST(Recover, UniformSourcesUseTheirKurtosis) {
  const GroundTruth gt = make_ground_truth(3, 2.0, 0.0, SourceDistribution::UniformSymmetric, 2);
  const ExactChain c = exact_chain(gt, 5);
  const Matrix C = gt.A * gt.A.transpose();
  RecoverOptions opts;
  opts.source_kurtosis = source_kurtosis(gt.source);
  const RecoveredModel m = recover_model(c.q, c.white, c.R, C, opts);
  for (Index i = 0; i < 3; ++i) EXPECT_NEAR(m.D_hat(i) / c.D(i), 1.0, 1e-6);
  EXPECT_LE((m.A_hat - gt.A).norm(), 1e-8);
  // The Rademacher scale shrinks every column by (6/5 / 2)^1/4.
  const RecoveredModel wrong = recover_model(c.q, c.white, c.R, C);
  for (Index i = 0; i < 3; ++i)
    EXPECT_NEAR(wrong.A_hat.col(i).norm() / gt.A.col(i).norm(), std::pow(0.6, 0.25), 1e-8);
}

TEST(Recover, LiteralConstantIsOffByFixedFactor) {
  const GroundTruth gt = make_ground_truth(3, 2.0, 0.0, SourceDistribution::Rademacher, 2);
  const ExactChain c = exact_chain(gt, 5);
  RecoverOptions opts;
  opts.paper_literal_constant = true;
  const RecoveredModel m = recover_model(c.q, c.white, c.R, Matrix(gt.A * gt.A.transpose()), opts);
  for (Index i = 0; i < 3; ++i) EXPECT_NEAR(c.D(i) / m.D_hat(i), 2.0 * std::sqrt(2.0), 1e-9);
}

TEST(Recover, OrthonormalAWithPermutedSignedRotation) {
  auto gen = make_stream(3, "perm");
  GroundTruth gt;
  gt.n = 4;
  gt.A = random_orthogonal(4, gen);
  gt.Sigma = Matrix::Zero(4, 4);
  const ExactChain c = exact_chain(gt, 1);
  Matrix R = c.R;
  R.col(0).swap(R.col(2));
  R.col(1) *= -1.0;
  const RecoveredModel m = recover_model(c.q, c.white, R, Matrix(gt.A * gt.A.transpose()));
  EXPECT_LE(match_columns(m.A_hat, gt.A).frob_error, 1e-8);
  EXPECT_LE(m.Sigma_hat.norm(), 1e-8);
}

TEST(Recover, NoiseGoesIntoSigma) {
  const GroundTruth gt = make_ground_truth(3, 2.0, 0.7, SourceDistribution::Rademacher, 4);
  const ExactChain c = exact_chain(gt, 2);
  const Matrix C = gt.A * gt.A.transpose() + gt.Sigma;
  const RecoveredModel m = recover_model(c.q, c.white, c.R, C);
  EXPECT_LE(sigma_error(m.Sigma_hat, gt.Sigma), 1e-8);
}

TEST(Recover, PsdProjectionClipsNegativeEigenvalues) {
  const GroundTruth gt = make_ground_truth(3, 2.0, 0.0, SourceDistribution::Rademacher, 5);
  const ExactChain c = exact_chain(gt, 3);
  const Matrix C = gt.A * gt.A.transpose() - 0.01 * Matrix::Identity(3, 3);
  RecoverOptions opts;
  const RecoveredModel raw = recover_model(c.q, c.white, c.R, C, opts);
  EXPECT_LT(raw.diagnostics.sigma_min_eig, 0.0);
  opts.psd_project = true;
  const RecoveredModel clipped = recover_model(c.q, c.white, c.R, C, opts);
  EXPECT_GE(Eigen::SelfAdjointEigenSolver<Matrix>(clipped.Sigma_hat).eigenvalues().minCoeff(), -1e-14);
}

TEST(Recover, RejectsNonPositiveObjective) {
  const GroundTruth gt = make_ground_truth(2, 2.0, 0.0, SourceDistribution::Rademacher, 6);
  const ExactChain c = exact_chain(gt, 1);
  const QuarticObjective neg = population_objective(c.q.B_inv * gt.A, 2.0);  // flips the sign
  EXPECT_THROW(recover_model(c.q, neg, c.R, Matrix::Identity(2, 2)), ModelError);
  EXPECT_THROW(recover_model(c.q, c.white, 2.0 * c.R, Matrix::Identity(2, 2)), InvalidArgument);
}

}  // namespace
}  // namespace nica
