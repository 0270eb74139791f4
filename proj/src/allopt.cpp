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

#include "nica/allopt.hpp"

#include <cmath>

namespace nica {

ProjectedObjective::ProjectedObjective(const SmoothFunction& base, Matrix basis)
    : base_(&base), basis_(std::move(basis)) {
  require(basis_.rows() == base.dim(), "project_objective: dimension mismatch");
  require(basis_.cols() >= 1, "project_objective: empty basis");
  const double defect = (basis_.transpose() * basis_ - Matrix::Identity(basis_.cols(), basis_.cols())).norm();
  require(defect <= 1e-10, "project_objective: basis must be orthonormal");
}

double ProjectedObjective::value(const Vector& w) const {
  require(w.size() == dim(), "ProjectedObjective: dimension mismatch");
  return base_->value(basis_ * w);
}

ObjectiveEvaluation ProjectedObjective::evaluate(const Vector& w) const {
  require(w.size() == dim(), "ProjectedObjective: dimension mismatch");
  const ObjectiveEvaluation full = base_->evaluate(basis_ * w);
  ObjectiveEvaluation e;
  e.value = full.value;
  e.gradient = basis_.transpose() * full.gradient;
  e.hessian = basis_.transpose() * full.hessian * basis_;
  e.hessian = (0.5 * (e.hessian + e.hessian.transpose())).eval();
  e.radial_derivative = e.gradient.dot(w);
  return e;
}

ProjectedObjective project_objective(const SmoothFunction& obj, Matrix basis) {
  return ProjectedObjective(obj, std::move(basis));
}

Matrix orth_complement_basis(const std::vector<Vector>& found, Index n) {
  require(n >= 1, "orth_complement_basis: n must be positive");
  const Index k = static_cast<Index>(found.size());
  require(k < n, "orth_complement_basis: complement would be empty");
  if (k == 0) return Matrix::Identity(n, n);

  Matrix f(n, k);
  for (Index j = 0; j < k; ++j) {
    require(found[static_cast<std::size_t>(j)].size() == n, "orth_complement_basis: dimension mismatch");
    f.col(j) = found[static_cast<std::size_t>(j)];
  }
  Eigen::HouseholderQR<Matrix> qr(f);
  const Matrix& r = qr.matrixQR();
  for (Index j = 0; j < k; ++j)
    if (std::abs(r(j, j)) < 1e-6)
      throw InvalidArgument("orth_complement_basis: found vectors are nearly dependent");
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  return q.rightCols(n - k);
}

Matrix MaximaSet::as_matrix() const {
  if (vectors.empty()) return Matrix();
  Matrix m(vectors.front().size(), static_cast<Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) m.col(static_cast<Index>(i)) = vectors[i];
  return m;
}

namespace {

// Moves `u` off a stationary point whose model is not negative definite.
bool maybe_nudge(const SmoothFunction& f, Vector& u, double beta, std::mt19937_64& gen) {
  const Index n = u.size();
  if (n < 2) return false;
  const ObjectiveEvaluation e = f.evaluate(u);
  const Matrix basis = tangent_basis(u);
  const Vector g = basis.transpose() * e.gradient;
  if (g.norm() > 1e-8 * (1.0 + std::abs(e.value))) return false;
  Matrix m = basis.transpose() * e.hessian * basis;
  m.diagonal().array() -= e.radial_derivative;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()));
  if (es.eigenvalues().maxCoeff() < 0.0) return false;  // strict local maximum

  std::normal_distribution<double> normal;
  Vector t(n - 1);
  for (Index i = 0; i < n - 1; ++i) t(i) = normal(gen);
  Vector xi = basis * t;
  xi *= 0.5 * beta / xi.norm();
  u += xi;
  u /= u.norm();
  return true;
}

}  // namespace

MaximaSet all_opt(const SmoothFunction& obj, const LocalSearchParams& params_full,
                  const LocalSearchParams& params_proj, std::uint64_t nudge_seed) {
  const Index n = obj.dim();
  require(n >= 2, "all_opt: dimension must be >= 2");
  params_full.validate();
  params_proj.validate();
  require(params_proj.delta >= 10.0 * params_full.delta,
          "all_opt: projected step size must satisfy delta' >= 10 * delta");

  auto gen = make_stream(nudge_seed, "nudge");
  MaximaSet out;

  auto record = [&](const AscentTrace& t, const char* phase, Index i) {
    if (t.stop_reason == StopReason::MaxIters) {
      out.failed = true;
      out.diagnostics.push_back(std::string(phase) + " search for maximum " + std::to_string(i + 1) +
                                " hit max_iters");
    }
  };

  Vector start = Vector::Unit(n, 0);
  bool nudged = maybe_nudge(obj, start, params_full.beta, gen);
  AscentTrace first = local_opt(obj, start, params_full);
  record(first, "full-space", 0);
  out.vectors.push_back(first.final_point);
  out.traces.emplace_back(AscentTrace{}, std::move(first));
  out.nudged.push_back(nudged);

  for (Index i = 1; i < n; ++i) {
    const Matrix basis = orth_complement_basis(out.vectors, n);
    const ProjectedObjective g(obj, basis);
    Vector w = Vector::Unit(n - i, 0);
    nudged = maybe_nudge(g, w, params_proj.beta, gen);
    AscentTrace projected = local_opt(g, w, params_proj);
    record(projected, "projected", i);
    Vector lifted = g.lift(projected.final_point);
    lifted /= lifted.norm();

    AscentTrace refined = local_opt(obj, lifted, params_full);
    record(refined, "refinement", i);
    Vector chosen = refined.final_point;
    for (std::size_t j = 0; j < out.vectors.size(); ++j) {
      if (std::abs(out.vectors[j].dot(refined.final_point)) > 0.1) {
        // The frame of found vectors must stay well conditioned; keep the
        // projected-phase point, which is orthogonal by construction.
        out.drifted.push_back(i);
        out.diagnostics.push_back("refinement of maximum " + std::to_string(i + 1) + " drifted towards maximum " +
                                  std::to_string(j + 1) + "; kept the projected-phase point");
        chosen = lifted;
        break;
      }
    }
    out.vectors.push_back(chosen);
    out.traces.emplace_back(std::move(projected), std::move(refined));
    out.nudged.push_back(nudged);
  }

  for (std::size_t a = 0; a < out.vectors.size(); ++a)
    for (std::size_t b = a + 1; b < out.vectors.size(); ++b)
      out.pairwise_dots = std::max(out.pairwise_dots, std::abs(out.vectors[a].dot(out.vectors[b])));
  return out;
}

}  // namespace nica
