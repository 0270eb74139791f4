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

#include "nica/common.hpp"

#include <vector>

namespace nica {

/// Optimal alignment of estimated columns to true columns under column
/// permutations and per-column sign flips.
struct MatchResult {
  /// permutation[j] = index of the estimated column matched to true column j,
  /// i.e. A_hat ~ A Pi diag(signs) with (A Pi)_i = A_{perm^-1(i)}.
  std::vector<Index> permutation;
  std::vector<int> signs;  // signs[j] multiplies true column j
  double frob_error = 0.0;
  std::vector<double> per_column_errors;  // indexed by true column
  double lambda_min_A = 0.0;              // smallest singular value of A_true

  /// A_true with columns permuted and signed into the estimate's order.
  Matrix aligned(const Matrix& A_true) const;
};

/// Minimum-cost perfect matching on a square cost matrix; returns
/// assignment[row] = column.
std::vector<Index> solve_assignment(const Matrix& cost);

/// Matched Frobenius error min over (Pi, k) of |A_hat - A Pi diag(k)|_F.
MatchResult match_columns(const Matrix& A_hat, const Matrix& A_true);

/// |Sigma_hat - Sigma_true|_F.
double sigma_error(const Matrix& Sigma_hat, const Matrix& Sigma_true);

}  // namespace nica
