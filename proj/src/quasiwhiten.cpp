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

#include <cmath>

namespace nica {

Vector pick_u0(Index n, std::uint64_t seed) {
  require(n >= 2, "pick_u0: n must be >= 2");
  auto gen = make_stream(seed, "u0");
  std::normal_distribution<double> normal;
  Vector u(n);
  do {
    for (Index i = 0; i < n; ++i) u(i) = normal(gen);
  } while (u.norm() == 0.0);
  return u / u.norm();
}

Matrix estimate_hessian_at(const Vector& u0, const QuarticObjective& empirical) {
  require(u0.size() == empirical.dim(), "estimate_hessian_at: dimension mismatch");
  return empirical.evaluate(u0).hessian;
}

Matrix estimate_hessian_at(const Vector& u0, const SampleSet& s, const ReductionOptions& opts) {
  require(u0.size() == s.dim(), "estimate_hessian_at: dimension mismatch");
  return estimate_hessian_at(u0, build_empirical_objective(s, opts));
}

PsdFactor factor_psd(const Matrix& H_hat, double eig_floor_ratio) {
  require(H_hat.rows() == H_hat.cols() && H_hat.rows() >= 1, "factor_psd: matrix must be square");
  require(eig_floor_ratio > 0.0 && eig_floor_ratio < 1.0, "factor_psd: eig_floor_ratio must lie in (0, 1)");
  require(H_hat.allFinite(), "factor_psd: non-finite input");
  const double asym = (H_hat - H_hat.transpose()).norm();
  require(asym <= 1e-10 * std::max(1.0, H_hat.norm()), "factor_psd: matrix must be symmetric");

  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (H_hat + H_hat.transpose()));
  Vector lambda = es.eigenvalues();
  const double lambda_max = lambda.maxCoeff();
  if (!(lambda_max > 0.0))
    throw ModelError("factor_psd: largest Hessian eigenvalue is not positive; data inconsistent with the model");

  const double floor = eig_floor_ratio * lambda_max;
  PsdFactor f;
  f.lambda_max = lambda_max;
  for (Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) < floor) {
      lambda(i) = floor;
      ++f.floored_eigen_count;
    }
  }
  const Matrix& u = es.eigenvectors();
  f.B = u * lambda.cwiseSqrt().asDiagonal();
  f.B_inv = lambda.cwiseSqrt().cwiseInverse().asDiagonal() * u.transpose();
  f.floored = u * lambda.asDiagonal() * u.transpose();
  return f;
}

QuasiWhitening quasi_whiten(const SampleSet& s, std::uint64_t seed, double eig_floor_ratio,
                            const ReductionOptions& opts) {
  QuasiWhitening q;
  q.u0 = pick_u0(s.dim(), seed);
  q.H_hat = estimate_hessian_at(q.u0, s, opts);
  PsdFactor f = factor_psd(q.H_hat, eig_floor_ratio);
  q.B = std::move(f.B);
  q.B_inv = std::move(f.B_inv);
  q.floored_eigen_count = f.floored_eigen_count;
  q.floor_applied = f.floored_eigen_count > 0;
  return q;
}

Vector diag_weights(const Matrix& A, const Vector& u, double kurtosis) {
  require(A.rows() == u.size(), "diag_weights: dimension mismatch");
  require(kurtosis < 0.0, "diag_weights: source kurtosis must be negative");
  return -12.0 * kurtosis * (A.transpose() * u).cwiseAbs2();
}

}  // namespace nica
