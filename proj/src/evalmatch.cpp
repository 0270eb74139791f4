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

#include "nica/evalmatch.hpp"

#include <cmath>
#include <limits>

namespace nica {

std::vector<Index> solve_assignment(const Matrix& cost) {
  // Shortest augmenting path with row/column potentials, O(n^3).
  const Index n = cost.rows();
  require(cost.cols() == n, "solve_assignment: cost matrix must be square");
  require(cost.allFinite(), "solve_assignment: non-finite cost");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0), v(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<Index> p(static_cast<std::size_t>(n + 1), 0), way(static_cast<std::size_t>(n + 1), 0);
  for (Index i = 1; i <= n; ++i) {
    p[0] = i;
    Index j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n + 1), inf);
    std::vector<char> used(static_cast<std::size_t>(n + 1), 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const Index i0 = p[static_cast<std::size_t>(j0)];
      double step = inf;
      Index j1 = 0;
      for (Index j = 1; j <= n; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        if (used[sj]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[sj];
        if (cur < minv[sj]) {
          minv[sj] = cur;
          way[sj] = j0;
        }
        if (minv[sj] < step) {
          step = minv[sj];
          j1 = j;
        }
      }
      for (Index j = 0; j <= n; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        if (used[sj]) {
          u[static_cast<std::size_t>(p[sj])] += step;
          v[sj] -= step;
        } else {
          minv[sj] -= step;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const Index j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<Index> assignment(static_cast<std::size_t>(n), -1);
  for (Index j = 1; j <= n; ++j) assignment[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
  return assignment;
}

Matrix MatchResult::aligned(const Matrix& A_true) const {
  Matrix out(A_true.rows(), A_true.cols());
  for (std::size_t j = 0; j < permutation.size(); ++j)
    out.col(permutation[j]) = signs[j] * A_true.col(static_cast<Index>(j));
  return out;
}

MatchResult match_columns(const Matrix& A_hat, const Matrix& A_true) {
  require(A_hat.rows() == A_true.rows() && A_hat.cols() == A_true.cols(), "match_columns: dimension mismatch");
  require(A_true.cols() >= 1, "match_columns: empty matrices");
  const Index n = A_true.cols();
  for (Index j = 0; j < n; ++j) require(A_true.col(j).norm() > 0.0, "match_columns: A_true has a zero column");

  // cost(j, i): true column j against estimated column i, sign folded in.
  Matrix cost(n, n);
  Eigen::MatrixXi best_sign(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) {
      const double plus = (A_hat.col(i) - A_true.col(j)).squaredNorm();
      const double minus = (A_hat.col(i) + A_true.col(j)).squaredNorm();
      cost(j, i) = std::min(plus, minus);
      best_sign(j, i) = minus < plus ? -1 : 1;
    }
  const std::vector<Index> assignment = solve_assignment(cost);

  MatchResult r;
  r.permutation = assignment;
  r.signs.resize(static_cast<std::size_t>(n));
  r.per_column_errors.resize(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    const Index i = assignment[static_cast<std::size_t>(j)];
    r.signs[static_cast<std::size_t>(j)] = best_sign(j, i);
  }
  const Matrix diff = A_hat - r.aligned(A_true);
  for (Index j = 0; j < n; ++j)
    r.per_column_errors[static_cast<std::size_t>(j)] = diff.col(assignment[static_cast<std::size_t>(j)]).norm();
  r.frob_error = diff.norm();
  if (A_true.rows() == A_true.cols()) {
    Eigen::JacobiSVD<Matrix> svd(A_true);
    r.lambda_min_A = svd.singularValues().minCoeff();
  }
  return r;
}

double sigma_error(const Matrix& Sigma_hat, const Matrix& Sigma_true) {
  require(Sigma_hat.rows() == Sigma_true.rows() && Sigma_hat.cols() == Sigma_true.cols(),
          "sigma_error: dimension mismatch");
  return (Sigma_hat - Sigma_true).norm();
}

}  // namespace nica
