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

#include "nica/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace nica {

SymmetricTensor4::SymmetricTensor4(Index n) : n_(n), data_(static_cast<std::size_t>(n * n * n * n), 0.0) {
  require(n >= 1, "SymmetricTensor4: dimension must be positive");
}

const std::vector<std::array<int, 4>>& SymmetricTensor4::multi_indices(Index n) {
  static std::mutex mu;
  static std::map<Index, std::vector<std::array<int, 4>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<std::array<int, 4>> idx;
  const int m = static_cast<int>(n);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j)
      for (int k = j; k < m; ++k)
        for (int l = k; l < m; ++l) idx.push_back({i, j, k, l});
  return cache.emplace(n, std::move(idx)).first->second;
}

SymmetricTensor4 SymmetricTensor4::from_unique(Index n, const std::vector<double>& unique) {
  const auto& idx = multi_indices(n);
  require(unique.size() == idx.size(), "SymmetricTensor4::from_unique: size mismatch");
  SymmetricTensor4 t(n);
  for (std::size_t m = 0; m < idx.size(); ++m) {
    std::array<int, 4> p = idx[m];
    // p is sorted, so next_permutation visits each distinct arrangement once.
    do {
      t.data_[static_cast<std::size_t>(((p[0] * n + p[1]) * n + p[2]) * n + p[3])] = unique[m];
    } while (std::next_permutation(p.begin(), p.end()));
  }
  return t;
}

SymmetricTensor4 SymmetricTensor4::symmetrize(Index n, const std::vector<double>& dense) {
  require(dense.size() == static_cast<std::size_t>(n * n * n * n),
          "SymmetricTensor4::symmetrize: size mismatch");
  const auto& idx = multi_indices(n);
  std::vector<double> unique(idx.size());
  for (std::size_t m = 0; m < idx.size(); ++m) {
    std::array<int, 4> p = idx[m];
    double sum = 0.0;
    int count = 0;
    do {
      sum += dense[static_cast<std::size_t>(((p[0] * n + p[1]) * n + p[2]) * n + p[3])];
      ++count;
    } while (std::next_permutation(p.begin(), p.end()));
    unique[m] = sum / count;
  }
  return from_unique(n, unique);
}

Matrix SymmetricTensor4::contract2(const Vector& u) const {
  require(u.size() == n_, "SymmetricTensor4::contract2: dimension mismatch");
  const Index n2 = n_ * n_;
  // Row-major flattening: data_[(ij) * n2 + (kl)] with ij as the leading pair.
  Eigen::Map<const Matrix> flat(data_.data(), n2, n2);
  Vector uu(n2);
  for (Index i = 0; i < n_; ++i)
    for (Index j = 0; j < n_; ++j) uu(i * n_ + j) = u(i) * u(j);
  Vector kl = flat * uu;  // symmetric, so the pair ordering is immaterial
  Matrix out(n_, n_);
  for (Index k = 0; k < n_; ++k)
    for (Index l = 0; l < n_; ++l) out(k, l) = kl(k * n_ + l);
  return out;
}

double SymmetricTensor4::contract4(const Vector& u) const {
  return u.dot(contract2(u) * u);
}

double SymmetricTensor4::max_asymmetry() const {
  double scale = 0.0;
  for (double v : data_) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  const int m = static_cast<int>(n_);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          std::array<int, 4> p{i, j, k, l};
          const double ref = (*this)(i, j, k, l);
          std::sort(p.begin(), p.end());
          do {
            worst = std::max(worst, std::abs(ref - (*this)(p[0], p[1], p[2], p[3])));
          } while (std::next_permutation(p.begin(), p.end()));
        }
  return worst / scale;
}

double SymmetricTensor4::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

SymmetricTensor4& SymmetricTensor4::operator+=(const SymmetricTensor4& other) {
  require(other.n_ == n_, "SymmetricTensor4: dimension mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

SymmetricTensor4& SymmetricTensor4::operator*=(double c) {
  for (double& v : data_) v *= c;
  return *this;
}

}  // namespace nica
