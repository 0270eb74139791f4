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

#include "nica/localsearch.hpp"

#include <memory>
#include <utility>
#include <vector>

namespace nica {

/// Restriction g(w) = f(basis * w) of a function to the span of `basis`.
class ProjectedObjective final : public SmoothFunction {
 public:
  /// `base` must outlive the projection.
  ProjectedObjective(const SmoothFunction& base, Matrix basis);

  Index dim() const override { return basis_.cols(); }
  double value(const Vector& w) const override;
  ObjectiveEvaluation evaluate(const Vector& w) const override;
  int homogeneous_degree() const override { return base_->homogeneous_degree(); }

  const Matrix& basis() const { return basis_; }
  Vector lift(const Vector& w) const { return basis_ * w; }

 private:
  const SmoothFunction* base_;
  Matrix basis_;
};

/// Orthonormal basis of the orthogonal complement of `found` (n x (n - k)),
/// taken from the trailing columns of a full Householder QR of the found
/// vectors. Returns the identity when nothing has been found.
Matrix orth_complement_basis(const std::vector<Vector>& found, Index n);

ProjectedObjective project_objective(const SmoothFunction& obj, Matrix basis);

struct MaximaSet {
  std::vector<Vector> vectors;
  double pairwise_dots = 0.0;  // max |v_i . v_j|, i != j
  /// (projected phase, refinement phase); the first vector has no projected phase.
  std::vector<std::pair<AscentTrace, AscentTrace>> traces;
  std::vector<bool> nudged;  // start point was moved off a saddle
  bool failed = false;       // some search hit max_iters
  /// Indices whose refinement re-approached an earlier maximum (|dot| > 0.1);
  /// the projected-phase point is kept for those.
  std::vector<Index> drifted;
  std::vector<std::string> diagnostics;

  /// Vectors as the columns of an n x n matrix.
  Matrix as_matrix() const;
};

/// Finds all n orthogonal local maxima by deflation with refinement.
///
/// v_1 comes from a full-space search started at e_1. For i >= 2 the
/// function is restricted to the complement of v_1..v_{i-1}, searched from
/// the first complement coordinate with params_proj, mapped back, and
/// refined in the full space with params_full. A start sitting on a
/// non-maximal stationary point is nudged by a seeded random tangent of
/// norm beta / 2. A refinement that comes back within |dot| > 0.1 of an
/// earlier maximum is replaced by its projected-phase point. Requires params_proj.delta >= 10 * params_full.delta.
MaximaSet all_opt(const SmoothFunction& obj, const LocalSearchParams& params_full,
                  const LocalSearchParams& params_proj, std::uint64_t nudge_seed = 0);

}  // namespace nica
