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

#include <cmath>
#include <sstream>

namespace nica {

Matrix estimate_cov(const SampleSet& s, const ReductionOptions& opts) {
  const Index n = s.dim();
  const auto width = static_cast<std::size_t>(n * n);
  std::vector<double> sums = parallel_sum(s.pairs(), width, opts, [&](Index lo, Index hi, std::vector<double>& acc) {
    Eigen::Map<Matrix> c(acc.data(), n, n);
    const auto y = s.first().middleCols(lo, hi - lo);
    const auto yp = s.second().middleCols(lo, hi - lo);
    c.noalias() += y * y.transpose();
    c.noalias() += yp * yp.transpose();
  });
  Matrix c = Eigen::Map<Matrix>(sums.data(), n, n) / (2.0 * static_cast<double>(s.pairs()));
  return 0.5 * (c + c.transpose());
}

RecoveredModel recover_model(const QuasiWhitening& b, const SmoothFunction& obj_white, const Matrix& r_hat,
                             const Matrix& C_hat, const RecoverOptions& opts) {
  const Index n = b.B.rows();
  require(b.B.cols() == n && r_hat.rows() == n && r_hat.cols() == n && obj_white.dim() == n &&
              C_hat.rows() == n && C_hat.cols() == n,
          "recover_model: dimension mismatch");
  for (Index i = 0; i < n; ++i)
    require(std::abs(r_hat.col(i).norm() - 1.0) <= 1e-8, "recover_model: R_hat columns must be unit vectors");

  RecoveredModel m;
  m.R_hat = r_hat;
  m.C_hat = C_hat;
  m.D_hat.resize(n);
  for (Index i = 0; i < n; ++i) {
    const double p = obj_white.value(r_hat.col(i));
    if (!(p > 0.0)) {
      std::ostringstream msg;
      msg << "recover_model: whitened objective at recovered direction " << i + 1 << " is " << p
          << " (<= 0); rotation recovery failed or data is undersampled";
      throw ModelError(msg.str());
    }
    m.D_hat(i) = opts.paper_literal_constant ? 0.5 / std::sqrt(p) : std::sqrt(-opts.source_kurtosis / p);
  }

  m.A_hat = b.B * r_hat * m.D_hat.cwiseSqrt().cwiseInverse().asDiagonal();
  Matrix sigma = C_hat - m.A_hat * m.A_hat.transpose();
  sigma = (0.5 * (sigma + sigma.transpose())).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma);
  m.diagnostics.sigma_min_eig = es.eigenvalues().minCoeff();
  if (opts.psd_project && m.diagnostics.sigma_min_eig < 0.0) {
    sigma = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).asDiagonal() * es.eigenvectors().transpose();
    sigma = (0.5 * (sigma + sigma.transpose())).eval();
  }
  m.Sigma_hat = std::move(sigma);
  m.diagnostics.r_orthogonality = (r_hat.transpose() * r_hat - Matrix::Identity(n, n)).norm();
  m.diagnostics.floored_eigs = b.floored_eigen_count;
  return m;
}

RecoveredModel recover_model(const QuasiWhitening& b, const SmoothFunction& obj_white, const Matrix& r_hat,
                             const SampleSet& s, const RecoverOptions& opts) {
  return recover_model(b, obj_white, r_hat, estimate_cov(s, opts.reduction), opts);
}

}  // namespace nica
