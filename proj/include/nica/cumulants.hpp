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
#include "nica/model.hpp"
#include "nica/reduction.hpp"
#include "nica/tensor.hpp"

#include <optional>
#include <span>

namespace nica {

/// Value and exact derivatives of a smooth function at a point.
struct ObjectiveEvaluation {
  double value = 0.0;
  Vector gradient;
  Matrix hessian;
  double radial_derivative = 0.0;  // gradient . u
};

/// A twice-differentiable function on R^n that local search can query.
class SmoothFunction {
 public:
  virtual ~SmoothFunction() = default;
  virtual Index dim() const = 0;
  virtual double value(const Vector& u) const = 0;
  virtual ObjectiveEvaluation evaluate(const Vector& u) const = 0;
  /// Degree of homogeneity when known (4 for quartic forms), 0 otherwise.
  virtual int homogeneous_degree() const { return 0; }
};

/// Homogeneous degree-4 polynomial objective on R^n.
///
/// Three representations are supported:
///  - MomentTensors: the empirical cumulant objective
///      -mean (u.y)^4 + 3 mean (u.y)^2 (u.y')^2
///    stored as the symmetric tensors T_pure = mean y^(x4) and
///    T_pair = sym mean (y (x) y (x) y' (x) y').
///  - AnalyticOracle: sum_i d_i (u . R_i)^4 with R orthogonal, d > 0.
///  - Polynomial: u -> T(u, u, u, u) for an arbitrary symmetric tensor.
/// Any representation may carry an additive polynomial perturbation.
class QuarticObjective final : public SmoothFunction {
 public:
  enum class Representation { MomentTensors, AnalyticOracle, Polynomial };

  static QuarticObjective from_moments(SymmetricTensor4 pure, SymmetricTensor4 pair, Index pairs);
  static QuarticObjective polynomial(SymmetricTensor4 coefficients);

  /// Returns a copy that adds `extra(u, u, u, u)` to every evaluation.
  QuarticObjective with_perturbation(const SymmetricTensor4& extra) const;

  Index dim() const override { return n_; }
  double value(const Vector& u) const override;
  ObjectiveEvaluation evaluate(const Vector& u) const override;
  int homogeneous_degree() const override { return 4; }

  Representation representation() const { return rep_; }
  bool perturbed() const { return perturbed_; }

  /// Sample count behind a MomentTensors objective (0 otherwise).
  Index sample_pairs() const { return pairs_; }
  const SymmetricTensor4& moment_pure() const;
  const SymmetricTensor4& moment_pair() const;
  const Vector& oracle_weights() const;
  const Matrix& oracle_rotation() const;

 private:
  friend QuarticObjective analytic_oracle(const Vector& d, const Matrix& R);
  QuarticObjective() = default;

  Index n_ = 0;
  Representation rep_ = Representation::Polynomial;
  bool perturbed_ = false;
  Index pairs_ = 0;
  std::optional<SymmetricTensor4> pure_;
  std::optional<SymmetricTensor4> pair_;
  std::optional<SymmetricTensor4> combined_;  // polynomial part used for evaluation
  Vector weights_;
  Matrix rotation_;
};

/// m4 - 3 m2^2 over raw (uncentered) moments.
double khat4_scalar(std::span<const double> samples);

/// Empirical objective from moment tensors accumulated in one pass.
QuarticObjective build_empirical_objective(const SampleSet& s, const ReductionOptions& opts = {});

/// Empirical objective of the transformed data {B^-1 y_i, B^-1 y'_i}.
QuarticObjective whiten_objective(const SampleSet& s, const Matrix& b_inverse,
                                  const ReductionOptions& opts = {});

/// Closed-form objective sum_i d_i (u . R_i)^4; R columns are the R_i.
QuarticObjective analytic_oracle(const Vector& d, const Matrix& R);

/// Expectation limit of the cumulant objective for y = A x + eta with i.i.d.
/// unit-variance sources of excess kurtosis `kurtosis`:
///   P(u) = -kurtosis * sum_i (u . A_i)^4   (independent of the noise).
QuarticObjective population_objective(const Matrix& A, double kurtosis);

inline ObjectiveEvaluation evaluate(const SmoothFunction& obj, const Vector& u) {
  return obj.evaluate(u);
}

/// Data-quality check for the mean-zero assumption (never corrects the data).
struct MeanCheck {
  double mean_norm = 0.0;
  double threshold = 0.0;  // 5 sqrt(trace(C) / N)
  bool warn = false;
};
MeanCheck check_sample_mean(const SampleSet& s);

}  // namespace nica
