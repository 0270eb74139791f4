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

#include "nica/cumulants.hpp"
#include "nica/model.hpp"

namespace nica {

/// Factorization B B^T of the floored Hessian estimate at u0.
struct QuasiWhitening {
  Vector u0;
  Matrix H_hat;
  Matrix B;
  Matrix B_inv;
  bool floor_applied = false;
  Index floored_eigen_count = 0;
};

/// Uniform draw on the unit sphere (normalized Gaussian), seeded.
Vector pick_u0(Index n, std::uint64_t seed);

/// Exact Hessian at u0 of the empirical cumulant objective.
Matrix estimate_hessian_at(const Vector& u0, const SampleSet& s, const ReductionOptions& opts = {});
/// Same, for an already-built empirical objective.
Matrix estimate_hessian_at(const Vector& u0, const QuarticObjective& empirical);

struct PsdFactor {
  Matrix B;
  Matrix B_inv;
  Matrix floored;  // U diag(max(lambda, floor)) U^T
  Index floored_eigen_count = 0;
  double lambda_max = 0.0;
};

/// Symmetric eigendecomposition H = U L U^T with eigenvalues below
/// eig_floor_ratio * lambda_max raised to that floor; B = U L^1/2 and
/// B_inv = L^-1/2 U^T. Throws ModelError when lambda_max <= 0.
PsdFactor factor_psd(const Matrix& H_hat, double eig_floor_ratio = 1e-8);

/// u0 draw, Hessian estimate and factorization in one step.
QuasiWhitening quasi_whiten(const SampleSet& s, std::uint64_t seed, double eig_floor_ratio = 1e-8,
                            const ReductionOptions& opts = {});

/// D_A(u)_kk = -12 kurtosis (A_k . u)^2 as a vector; 24 (A_k . u)^2 for
/// Rademacher sources.
Vector diag_weights(const Matrix& A, const Vector& u, double kurtosis = -2.0);

}  // namespace nica
