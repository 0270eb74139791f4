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

#include "nica/quasiwhiten.hpp"

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace nica {
namespace {

TEST(PickU0, UnitAndDeterministic) {
  const Vector a = pick_u0(5, 3), b = pick_u0(5, 3), c = pick_u0(5, 4);
  EXPECT_NEAR(a.norm(), 1.0, 1e-15);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  EXPECT_THROW(pick_u0(1, 0), InvalidArgument);
}

TEST(DiagWeights, Formula) {
  Matrix A(2, 2);
  A << 1.0, 2.0, 0.0, 1.0;
  Vector u(2);
  u << 0.6, 0.8;
  const Vector d = diag_weights(A, u);
  EXPECT_NEAR(d(0), 24.0 * 0.36, 1e-12);
  EXPECT_NEAR(d(1), 24.0 * 2.0 * 2.0, 1e-12);
  const Vector du = diag_weights(A, u, source_kurtosis(SourceDistribution::UniformSymmetric));
  EXPECT_NEAR(du(0), 14.4 * 0.36, 1e-12);
  EXPECT_THROW(diag_weights(A, u, 0.0), InvalidArgument);
}

TEST(DiagWeights, UniformPopulationHessian) {
  const GroundTruth gt = make_ground_truth(3, 2.0, 0.5, SourceDistribution::UniformSymmetric, 6);
  const double kappa = source_kurtosis(gt.source);
  const Vector u0 = pick_u0(3, 6);
  const Matrix target = gt.A * diag_weights(gt.A, u0, kappa).asDiagonal() * gt.A.transpose();
  const Matrix H = estimate_hessian_at(u0, population_objective(gt.A, kappa));
  EXPECT_LE((H - target).norm(), 1e-10 * target.norm());
}

TEST(EstimateHessian, MatchesDirectOracle) {
  const GroundTruth gt = make_ground_truth(3, 2.0, 0.5, SourceDistribution::Rademacher, 1);
  const SampleSet s = sample_dataset(gt, 4000, 1);
  const Vector u0 = pick_u0(3, 2);
  const Matrix H = estimate_hessian_at(u0, s);
  EXPECT_LE((H - oracle::direct_objective(s, u0).hessian).norm(), 1e-10 * (1.0 + H.norm()));
  EXPECT_EQ(H, H.transpose());
}

TEST(EstimateHessian, NoiselessIdentityLimit) {
  GroundTruth gt;
  gt.n = 3;
  gt.A = Matrix::Identity(3, 3);
  gt.Sigma = Matrix::Zero(3, 3);
  const Vector u0 = pick_u0(3, 5);
  const Matrix target = (24.0 * u0.array().square()).matrix().asDiagonal();
  const Matrix H = estimate_hessian_at(u0, population_objective(gt.A, -2.0));
  EXPECT_LE((H - target).norm(), 1e-12);
  const Matrix H_hat = estimate_hessian_at(u0, sample_dataset(gt, 300000, 5));
  EXPECT_LE((H_hat - target).cwiseAbs().maxCoeff(), 0.05 * target.maxCoeff());
}

TEST(FactorPsd, IdentityInput) {
  const PsdFactor f = factor_psd(Matrix::Identity(3, 3));
  EXPECT_LE((f.B * f.B.transpose() - Matrix::Identity(3, 3)).norm(), 1e-14);
  EXPECT_LE((f.B * f.B_inv - Matrix::Identity(3, 3)).norm(), 1e-14);
  EXPECT_EQ(f.floored_eigen_count, 0);
}

TEST(FactorPsd, ExactHessianMakesRotation) {
  const GroundTruth gt = make_ground_truth(3, 2.0, 0.0, SourceDistribution::Rademacher, 3);
  const Vector u0 = pick_u0(3, 1);
  const Vector D = diag_weights(gt.A, u0);
  const PsdFactor f = factor_psd(gt.A * D.asDiagonal() * gt.A.transpose());
  const Matrix R = f.B_inv * gt.A * D.cwiseSqrt().asDiagonal();
  EXPECT_LE((R * R.transpose() - Matrix::Identity(3, 3)).norm(), 1e-8);
}

TEST(FactorPsd, SandwichedEstimateGivesNearRotation) {
  // H_hat with (1 - eps) H <= H_hat <= (1 + eps) H.
  const double eps = 1e-3;
  auto gen = make_stream(4, "sandwich");
  const GroundTruth gt = make_ground_truth(4, 2.0, 0.0, SourceDistribution::Rademacher, 4);
  const Vector u0 = pick_u0(4, 4);
  const Vector D = diag_weights(gt.A, u0);
  const Matrix C = gt.A * D.cwiseSqrt().asDiagonal();
  const Matrix Q = random_orthogonal(4, gen);
  const Vector scale = oracle::uniform_vector(4, 1.0 - eps, 1.0 + eps, gen);
  const Matrix H_hat = C * Q * scale.asDiagonal() * Q.transpose() * C.transpose();
  const PsdFactor f = factor_psd(0.5 * (H_hat + H_hat.transpose()));
  const Vector sv = Eigen::JacobiSVD<Matrix>(f.B_inv * C).singularValues();
  EXPECT_GE(sv.minCoeff(), 1.0 - 2.0 * eps);
  EXPECT_LE(sv.maxCoeff(), 1.0 + 2.0 * eps);
}

TEST(FactorPsd, FloorsSmallAndNegativeEigenvalues) {
  Matrix H = Matrix::Zero(3, 3);
  H.diagonal() << 4.0, 1e-12, -0.5;
  const PsdFactor f = factor_psd(H, 1e-6);
  EXPECT_EQ(f.floored_eigen_count, 2);
  EXPECT_DOUBLE_EQ(f.lambda_max, 4.0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(f.floored);
  EXPECT_NEAR(es.eigenvalues().minCoeff(), 4e-6, 1e-18);
  EXPECT_LE((f.B * f.B.transpose() - f.floored).norm(), 1e-12);
  EXPECT_TRUE(f.B_inv.allFinite());
}

TEST(FactorPsd, RejectsNonPositiveSpectrum) {
  EXPECT_THROW(factor_psd(-Matrix::Identity(2, 2)), ModelError);
  EXPECT_THROW(factor_psd(Matrix::Zero(2, 2)), ModelError);
  Matrix asym(2, 2);
  asym << 1.0, 0.5, 0.0, 1.0;
  EXPECT_THROW(factor_psd(asym), InvalidArgument);
  EXPECT_THROW(factor_psd(Matrix::Identity(2, 2), 1.5), InvalidArgument);
}

TEST(QuasiWhiten, EndToEndOnSamples) {
  const GroundTruth gt = make_ground_truth(3, 2.0, 0.3, SourceDistribution::Rademacher, 6);
  const SampleSet s = sample_dataset(gt, 5000, 6);
  const QuasiWhitening q = quasi_whiten(s, 11);
  EXPECT_EQ(q.u0, pick_u0(3, 11));
  EXPECT_LE((q.H_hat - estimate_hessian_at(q.u0, s)).norm(), 1e-12 * (1.0 + q.H_hat.norm()));
  EXPECT_LE((q.B * q.B_inv - Matrix::Identity(3, 3)).norm(), 1e-8);
}

}  // namespace
}  // namespace nica
