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

#include "nica/model.hpp"

#include <cmath>

namespace nica {

std::mt19937_64 make_stream(std::uint64_t seed, std::string_view name) {
  // FNV-1a over the stream name.
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  return std::mt19937_64(seq);
}

std::string to_string(SourceDistribution source) {
  switch (source) {
    case SourceDistribution::Rademacher:
      return "rademacher";
    case SourceDistribution::UniformSymmetric:
      return "uniform";
  }
  return "unknown";
}

SourceDistribution parse_source(const std::string& name) {
  if (name == "rademacher") return SourceDistribution::Rademacher;
  if (name == "uniform") return SourceDistribution::UniformSymmetric;
  throw InvalidArgument("unknown source distribution '" + name + "' (expected rademacher|uniform)");
}

double source_kurtosis(SourceDistribution source) {
  switch (source) {
    case SourceDistribution::Rademacher:
      return 1.0 - 3.0;
    case SourceDistribution::UniformSymmetric:
      return 9.0 / 5.0 - 3.0;
  }
  return 0.0;
}

Matrix random_orthogonal(Index n, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  Matrix g(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) g(i, j) = normal(gen);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  // Sign fix makes the draw Haar-distributed.
  const Matrix& r = qr.matrixQR();
  for (Index j = 0; j < n; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

Matrix psd_sqrt(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (sym + sym.transpose()));
  Vector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

void GroundTruth::validate_and_clean() {
  require(n >= 1, "ground truth dimension must be positive");
  require(A.rows() == n && A.cols() == n, "A must be n x n");
  require(Sigma.rows() == n && Sigma.cols() == n, "Sigma must be n x n");
  require(A.allFinite() && Sigma.allFinite(), "ground truth contains non-finite entries");

  Eigen::JacobiSVD<Matrix> svd(A);
  require(svd.singularValues().minCoeff() > 0.0, "A must be invertible");

  const double asym = (Sigma - Sigma.transpose()).norm();
  require(asym <= 1e-10 * std::max(1.0, Sigma.norm()), "Sigma must be symmetric");
  Matrix sym = 0.5 * (Sigma + Sigma.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  const double spectral = es.eigenvalues().cwiseAbs().maxCoeff();
  require(es.eigenvalues().minCoeff() >= -1e-12 * spectral,
          "Sigma must be positive semidefinite");
  if (es.eigenvalues().minCoeff() < 0.0) {
    Vector clipped = es.eigenvalues().cwiseMax(0.0);
    sym = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().transpose();
    sym = (0.5 * (sym + sym.transpose())).eval();
  }
  Sigma = std::move(sym);
}

GroundTruth make_ground_truth(Index n, double cond_target, double noise_scale,
                              SourceDistribution source, std::uint64_t seed) {
  require(n >= 2, "make_ground_truth: n must be >= 2");
  require(cond_target >= 1.0, "make_ground_truth: cond_target must be >= 1");
  require(noise_scale >= 0.0, "make_ground_truth: noise_scale must be >= 0");

  auto gen = make_stream(seed, "model");
  Matrix u = random_orthogonal(n, gen);
  Matrix v = random_orthogonal(n, gen);
  Vector s(n);
  for (Index i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    s(i) = std::pow(cond_target, -t);
  }

  std::normal_distribution<double> normal;
  Matrix m(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) m(i, j) = normal(gen);

  GroundTruth gt;
  gt.n = n;
  gt.A = u * s.asDiagonal() * v.transpose();
  gt.Sigma = (noise_scale * noise_scale / static_cast<double>(n)) * (m * m.transpose());
  gt.source = source;
  gt.validate_and_clean();
  return gt;
}

SampleSet::SampleSet(Matrix first, Matrix second) : first_(std::move(first)), second_(std::move(second)) {
  require(first_.rows() >= 1, "SampleSet: dimension must be positive");
  require(first_.cols() >= 1, "SampleSet: at least one pair is required");
  require(first_.rows() == second_.rows() && first_.cols() == second_.cols(),
          "SampleSet: paired halves must have identical shapes");
}

SampleSet SampleSet::transformed(const Matrix& transform) const {
  require(transform.cols() == dim() && transform.rows() == dim(),
          "SampleSet::transformed: dimension mismatch");
  return SampleSet(transform * first_, transform * second_);
}

SampleSet sample_dataset(const GroundTruth& gt, Index n_pairs, std::uint64_t seed) {
  require(n_pairs >= 1, "sample_dataset: n_pairs must be >= 1");
  const Index n = gt.n;
  require(gt.A.rows() == n && gt.Sigma.rows() == n, "sample_dataset: malformed ground truth");

  const Matrix noise_root = psd_sqrt(gt.Sigma);
  const bool noiseless = noise_root.isZero(0.0);

  auto gen = make_stream(seed, "data");
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(-std::sqrt(3.0), std::sqrt(3.0));

  Matrix first(n, n_pairs);
  Matrix second(n, n_pairs);
  Vector x(n);
  Vector z(n);
  auto draw = [&](auto&& out) {
    for (Index k = 0; k < n; ++k) {
      if (gt.source == SourceDistribution::Rademacher)
        x(k) = (gen() >> 63) ? 1.0 : -1.0;
      else
        x(k) = uniform(gen);
    }
    for (Index k = 0; k < n; ++k) z(k) = normal(gen);
    out.noalias() = gt.A * x;
    if (!noiseless) out.noalias() += noise_root * z;
  };
  for (Index i = 0; i < n_pairs; ++i) {
    draw(first.col(i));
    draw(second.col(i));
  }
  return SampleSet(std::move(first), std::move(second));
}

}  // namespace nica
