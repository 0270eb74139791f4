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

#include "nica/cumulants.hpp"

#include <cmath>

namespace nica {

namespace {

constexpr Index kSubChunk = 1024;

// Packed index of the unordered pair {a, b}, a <= b.
struct PairIndex {
  explicit PairIndex(Index n) : n_(n), offset_(static_cast<std::size_t>(n)) {
    Index next = 0;
    for (Index a = 0; a < n; ++a) {
      offset_[static_cast<std::size_t>(a)] = next - a;
      next += n - a;
    }
    size_ = next;
  }
  Index operator()(Index a, Index b) const {
    if (a > b) std::swap(a, b);
    return offset_[static_cast<std::size_t>(a)] + b;
  }
  Index size() const { return size_; }

  Index n_;
  Index size_ = 0;
  std::vector<Index> offset_;
};

// Accumulates sum_s y^(x4) and sum_s sym(y (x) y (x) y' (x) y') on sorted
// multi-indices over pairs [begin, end), optionally transforming the data.
void accumulate_block(const SampleSet& s, const Matrix* transform, Index begin, Index end,
                      std::vector<double>& acc) {
  const Index n = s.dim();
  const PairIndex pidx(n);
  const Index np = pidx.size();
  const auto& tuples = SymmetricTensor4::multi_indices(n);
  const std::size_t nu = tuples.size();

  Matrix gram_pure = Matrix::Zero(np, np);
  Matrix gram_pair = Matrix::Zero(np, np);
  Matrix yy(kSubChunk, np);
  Matrix pp(kSubChunk, np);
  Matrix zt;
  Matrix zpt;
  for (Index lo = begin; lo < end; lo += kSubChunk) {
    const Index m = std::min(kSubChunk, end - lo);
    if (transform) {
      zt.noalias() = (*transform * s.first().middleCols(lo, m)).transpose();
      zpt.noalias() = (*transform * s.second().middleCols(lo, m)).transpose();
    } else {
      zt = s.first().middleCols(lo, m).transpose();
      zpt = s.second().middleCols(lo, m).transpose();
    }
    for (Index a = 0; a < n; ++a)
      for (Index b = a; b < n; ++b) {
        const Index c = pidx(a, b);
        yy.col(c).head(m) = zt.col(a).cwiseProduct(zt.col(b));
        pp.col(c).head(m) = zpt.col(a).cwiseProduct(zpt.col(b));
      }
    gram_pure.noalias() += yy.topRows(m).transpose() * yy.topRows(m);
    gram_pair.noalias() += yy.topRows(m).transpose() * pp.topRows(m);
  }

  for (std::size_t t = 0; t < nu; ++t) {
    const auto& q = tuples[t];
    const Index ij = pidx(q[0], q[1]), kl = pidx(q[2], q[3]);
    const Index ik = pidx(q[0], q[2]), jl = pidx(q[1], q[3]);
    const Index il = pidx(q[0], q[3]), jk = pidx(q[1], q[2]);
    acc[t] += gram_pure(ij, kl);
    // Six ways of assigning two of the four slots to y and two to y'.
    acc[nu + t] += (gram_pair(ij, kl) + gram_pair(ik, jl) + gram_pair(il, jk) + gram_pair(jk, il) +
                    gram_pair(jl, ik) + gram_pair(kl, ij)) /
                   6.0;
  }
}

QuarticObjective moments_objective(const SampleSet& s, const Matrix* transform,
                                   const ReductionOptions& opts) {
  const Index n = s.dim();
  const std::size_t nu = SymmetricTensor4::multi_indices(n).size();
  std::vector<double> sums = parallel_sum(
      s.pairs(), 2 * nu, opts, [&](Index lo, Index hi, std::vector<double>& acc) {
        accumulate_block(s, transform, lo, hi, acc);
      });
  const double inv = 1.0 / static_cast<double>(s.pairs());
  std::vector<double> pure(nu), pair(nu);
  for (std::size_t t = 0; t < nu; ++t) {
    pure[t] = sums[t] * inv;
    pair[t] = sums[nu + t] * inv;
  }
  return QuarticObjective::from_moments(SymmetricTensor4::from_unique(n, pure),
                                        SymmetricTensor4::from_unique(n, pair), s.pairs());
}

}  // namespace

QuarticObjective QuarticObjective::from_moments(SymmetricTensor4 pure, SymmetricTensor4 pair, Index pairs) {
  require(pure.dim() == pair.dim(), "from_moments: tensor dimensions differ");
  QuarticObjective obj;
  obj.n_ = pure.dim();
  obj.rep_ = Representation::MomentTensors;
  obj.pairs_ = pairs;
  obj.combined_ = (-1.0) * pure + 3.0 * pair;
  obj.pure_ = std::move(pure);
  obj.pair_ = std::move(pair);
  return obj;
}

QuarticObjective QuarticObjective::polynomial(SymmetricTensor4 coefficients) {
  QuarticObjective obj;
  obj.n_ = coefficients.dim();
  obj.rep_ = Representation::Polynomial;
  obj.combined_ = std::move(coefficients);
  return obj;
}

QuarticObjective QuarticObjective::with_perturbation(const SymmetricTensor4& extra) const {
  require(extra.dim() == n_, "with_perturbation: dimension mismatch");
  QuarticObjective obj = *this;
  if (obj.combined_)
    *obj.combined_ += extra;
  else
    obj.combined_ = extra;
  obj.perturbed_ = true;
  return obj;
}

const SymmetricTensor4& QuarticObjective::moment_pure() const {
  require(pure_.has_value(), "objective has no moment tensors");
  return *pure_;
}

const SymmetricTensor4& QuarticObjective::moment_pair() const {
  require(pair_.has_value(), "objective has no moment tensors");
  return *pair_;
}

const Vector& QuarticObjective::oracle_weights() const {
  require(rep_ == Representation::AnalyticOracle, "objective is not an analytic oracle");
  return weights_;
}

const Matrix& QuarticObjective::oracle_rotation() const {
  require(rep_ == Representation::AnalyticOracle, "objective is not an analytic oracle");
  return rotation_;
}

double QuarticObjective::value(const Vector& u) const {
  require(u.size() == n_, "QuarticObjective: dimension mismatch");
  double v = 0.0;
  if (rep_ == Representation::AnalyticOracle) {
    const Vector t = rotation_.transpose() * u;
    v += weights_.dot(t.array().pow(4).matrix());
  }
  if (combined_) v += combined_->contract4(u);
  return v;
}

ObjectiveEvaluation QuarticObjective::evaluate(const Vector& u) const {
  require(u.size() == n_, "QuarticObjective: dimension mismatch");
  ObjectiveEvaluation e;
  e.gradient = Vector::Zero(n_);
  e.hessian = Matrix::Zero(n_, n_);
  if (rep_ == Representation::AnalyticOracle) {
    const Vector t = rotation_.transpose() * u;
    const Vector t2 = t.cwiseAbs2();
    e.value += weights_.dot(t2.cwiseAbs2());
    e.gradient += rotation_ * (4.0 * weights_.cwiseProduct(t2).cwiseProduct(t));
    e.hessian += rotation_ * (12.0 * weights_.cwiseProduct(t2)).asDiagonal() * rotation_.transpose();
  }
  if (combined_) {
    const Matrix m = combined_->contract2(u);
    const Vector mu = m * u;
    e.value += u.dot(mu);
    e.gradient += 4.0 * mu;
    e.hessian += 12.0 * m;
  }
  e.hessian = (0.5 * (e.hessian + e.hessian.transpose())).eval();
  e.radial_derivative = e.gradient.dot(u);
  return e;
}

QuarticObjective analytic_oracle(const Vector& d, const Matrix& R) {
  const Index n = d.size();
  require(n >= 1, "analytic_oracle: empty weights");
  require(R.rows() == n && R.cols() == n, "analytic_oracle: R must be n x n");
  require((d.array() > 0.0).all(), "analytic_oracle: weights must be positive");
  require((R.transpose() * R - Matrix::Identity(n, n)).norm() <= 1e-10,
          "analytic_oracle: R must be orthogonal");
  QuarticObjective obj;
  obj.n_ = n;
  obj.rep_ = QuarticObjective::Representation::AnalyticOracle;
  obj.weights_ = d;
  obj.rotation_ = R;
  return obj;
}

QuarticObjective population_objective(const Matrix& A, double kurtosis) {
  const Index n = A.rows();
  require(n >= 1 && A.cols() >= 1, "population_objective: empty matrix");
  const auto& tuples = SymmetricTensor4::multi_indices(n);
  std::vector<double> unique(tuples.size(), 0.0);
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    const auto& q = tuples[t];
    double s = 0.0;
    for (Index c = 0; c < A.cols(); ++c) s += A(q[0], c) * A(q[1], c) * A(q[2], c) * A(q[3], c);
    unique[t] = -kurtosis * s;
  }
  return QuarticObjective::polynomial(SymmetricTensor4::from_unique(n, unique));
}

double khat4_scalar(std::span<const double> samples) {
  require(!samples.empty(), "khat4_scalar: empty input");
  require(samples.size() >= 2, "khat4_scalar: at least two samples are required");
  double m2 = 0.0, m4 = 0.0;
  for (double x : samples) {
    const double x2 = x * x;
    m2 += x2;
    m4 += x2 * x2;
  }
  const double count = static_cast<double>(samples.size());
  m2 /= count;
  m4 /= count;
  return m4 - 3.0 * m2 * m2;
}

QuarticObjective build_empirical_objective(const SampleSet& s, const ReductionOptions& opts) {
  return moments_objective(s, nullptr, opts);
}

QuarticObjective whiten_objective(const SampleSet& s, const Matrix& b_inverse, const ReductionOptions& opts) {
  require(b_inverse.rows() == s.dim() && b_inverse.cols() == s.dim(),
          "whiten_objective: dimension mismatch");
  require(b_inverse.allFinite(), "whiten_objective: non-finite transform");
  return moments_objective(s, &b_inverse, opts);
}

MeanCheck check_sample_mean(const SampleSet& s) {
  const double count = 2.0 * static_cast<double>(s.pairs());
  const Vector mean = (s.first().rowwise().sum() + s.second().rowwise().sum()) / count;
  const double trace = (s.first().squaredNorm() + s.second().squaredNorm()) / count;
  MeanCheck c;
  c.mean_norm = mean.norm();
  c.threshold = 5.0 * std::sqrt(trace / count);
  c.warn = c.mean_norm > c.threshold;
  return c;
}

}  // namespace nica
