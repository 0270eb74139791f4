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

#include <cstddef>
#include <string>

namespace nica {

/// Unit-variance, mean-zero source laws with fourth moment below 3.
enum class SourceDistribution { Rademacher, UniformSymmetric };

std::string to_string(SourceDistribution source);
SourceDistribution parse_source(const std::string& name);

/// E[x^4] - 3 for the unit-variance source.
double source_kurtosis(SourceDistribution source);

/// Hidden model y = A x + eta with eta ~ N(0, Sigma).
struct GroundTruth {
  Index n = 0;
  Matrix A;
  Matrix Sigma;
  SourceDistribution source = SourceDistribution::Rademacher;

  /// Checks shapes, invertibility of A and PSD-ness of Sigma, then replaces
  /// Sigma by its exactly-PSD symmetric cleanup.
  void validate_and_clean();
};

/// Random A with prescribed condition number (singular values geometrically
/// spaced in [1/cond_target, 1]) and Sigma = noise_scale^2 * M M^T / n.
GroundTruth make_ground_truth(Index n, double cond_target, double noise_scale,
                              SourceDistribution source, std::uint64_t seed);

/// 2N observations arranged as N pairs (y_i, y'_i). Column i of `first` is
/// y_i and column i of `second` is y'_i. Immutable after construction.
class SampleSet {
 public:
  SampleSet(Matrix first, Matrix second);

  Index dim() const { return first_.rows(); }
  Index pairs() const { return first_.cols(); }

  const Matrix& first() const { return first_; }
  const Matrix& second() const { return second_; }

  auto y(Index i) const { return first_.col(i); }
  auto y_prime(Index i) const { return second_.col(i); }

  /// Transformed copy {T y_i, T y'_i}.
  SampleSet transformed(const Matrix& transform) const;

 private:
  Matrix first_;
  Matrix second_;
};

/// Draws 2 * n_pairs independent observations from `gt`; draws 2i and 2i+1
/// (0-indexed) form pair i. Deterministic given the seed.
SampleSet sample_dataset(const GroundTruth& gt, Index n_pairs, std::uint64_t seed);

/// Haar-distributed random orthogonal matrix.
Matrix random_orthogonal(Index n, std::mt19937_64& gen);

/// Symmetric PSD square root via eigendecomposition; negative eigenvalues
/// are clipped to zero.
Matrix psd_sqrt(const Matrix& sym);

}  // namespace nica
