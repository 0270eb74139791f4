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
#include "nica/quasiwhiten.hpp"

namespace nica {

struct RecoverOptions {
  /// Fourth cumulant of the unit-variance sources: -2 for Rademacher,
  /// -6/5 for symmetric uniform. Sets D_ii = (-kurtosis / P'(R_i))^1/2.
  double source_kurtosis = -2.0;
  /// Use D_ii = 1/2 P'(R_i)^-1/2 as printed, ignoring the kurtosis.
  bool paper_literal_constant = false;
  /// Clip negative eigenvalues of Sigma_hat at zero.
  bool psd_project = false;
  ReductionOptions reduction;
};

struct RecoveryDiagnostics {
  double r_orthogonality = 0.0;  // |R^T R - I|_F
  double sigma_min_eig = 0.0;    // before any PSD projection
  Index floored_eigs = 0;
};

struct RecoveredModel {
  Matrix A_hat;
  Matrix Sigma_hat;
  Matrix R_hat;
  Vector D_hat;
  Matrix C_hat;
  RecoveryDiagnostics diagnostics;

  Index n() const { return A_hat.rows(); }
};

/// Empirical second moment (1 / 2N) sum y y^T over both halves of every pair.
Matrix estimate_cov(const SampleSet& s, const ReductionOptions& opts = {});

/// D_hat from the whitened objective at the columns of r_hat, then
/// A_hat = B R_hat D_hat^-1/2 and Sigma_hat = sym(C_hat - A_hat A_hat^T).
RecoveredModel recover_model(const QuasiWhitening& b, const SmoothFunction& obj_white, const Matrix& r_hat,
                             const Matrix& C_hat, const RecoverOptions& opts = {});

RecoveredModel recover_model(const QuasiWhitening& b, const SmoothFunction& obj_white, const Matrix& r_hat,
                             const SampleSet& s, const RecoverOptions& opts = {});

}  // namespace nica
