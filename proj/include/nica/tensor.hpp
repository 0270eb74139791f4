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

#include <array>
#include <vector>

namespace nica {

/// Fully symmetric order-4 tensor on R^n with dense n^4 storage.
///
/// Values are kept once per sorted multi-index (i <= j <= k <= l) during
/// accumulation and expanded to dense storage on demand, so every stored
/// entry is exactly invariant under index permutations.
class SymmetricTensor4 {
 public:
  SymmetricTensor4() = default;
  explicit SymmetricTensor4(Index n);

  /// Builds a tensor from values on sorted multi-indices, ordered as in
  /// `multi_indices(n)`.
  static SymmetricTensor4 from_unique(Index n, const std::vector<double>& unique);
  /// Symmetrizes an arbitrary dense n^4 array (average over 24 permutations).
  static SymmetricTensor4 symmetrize(Index n, const std::vector<double>& dense);

  /// Sorted multi-indices (i <= j <= k <= l) in lexicographic order.
  static const std::vector<std::array<int, 4>>& multi_indices(Index n);

  Index dim() const { return n_; }
  double operator()(Index i, Index j, Index k, Index l) const {
    return data_[static_cast<std::size_t>(((i * n_ + j) * n_ + k) * n_ + l)];
  }
  const std::vector<double>& dense() const { return data_; }

  /// T(u, u, .) as an n x n matrix.
  Matrix contract2(const Vector& u) const;
  /// T(u, u, u, u).
  double contract4(const Vector& u) const;

  /// Largest |T_ijkl - T_sigma(ijkl)| over all permutations, relative to max |T|.
  double max_asymmetry() const;
  double frobenius_norm() const;

  SymmetricTensor4& operator+=(const SymmetricTensor4& other);
  SymmetricTensor4& operator*=(double c);
  friend SymmetricTensor4 operator+(SymmetricTensor4 a, const SymmetricTensor4& b) { return a += b; }
  friend SymmetricTensor4 operator*(double c, SymmetricTensor4 a) { return a *= c; }

 private:
  Index n_ = 0;
  std::vector<double> data_;
};

}  // namespace nica
