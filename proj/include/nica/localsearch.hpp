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

#include "nica/cumulants.hpp"

#include <string>
#include <vector>

namespace nica {

enum class StepSolver { CandidateSet, ExactTrustRegion };

std::string to_string(StepSolver solver);
StepSolver parse_solver(const std::string& name);

struct LocalSearchParams {
  double beta = 1e-2;   // step radius
  double delta = 1e-8;  // a step is accepted when it gains at least delta / 2
  Index max_iters = 100000;
  StepSolver solver = StepSolver::CandidateSet;

  void validate() const;
};

enum class StopReason { NoImprovingStep, MaxIters };

std::string to_string(StopReason reason);

struct AscentTrace {
  Index iterations = 0;
  Vector final_point;
  double final_value = 0.0;
  std::vector<double> improvements;  // gains of accepted steps, in order
  StopReason stop_reason = StopReason::NoImprovingStep;
  Index exact_fallbacks = 0;  // accepted steps that needed the exact solver
};

/// Orthonormal basis (n x (n-1)) of the tangent space u^perp.
Matrix tangent_basis(const Vector& u);

/// Second-order model of f((u + xi) / |u + xi|) - f(u) for tangent xi:
///   g.xi + 1/2 xi^T H xi - 1/2 (g.u) |xi|^2.
double model_gain(const ObjectiveEvaluation& eval, const Vector& u, const Vector& xi);

/// Maximizes the tangent quadratic model over |xi| <= beta, u.xi = 0.
///
/// CandidateSet compares +-beta * (normalized projected gradient) and
/// +-beta * (top eigenvector of the corrected projected Hessian) and returns
/// the best, or zero when no candidate has positive model gain.
/// ExactTrustRegion solves the subproblem to optimality.
Vector propose_step(const ObjectiveEvaluation& eval, const Vector& u, double beta, StepSolver solver);

/// Trust-region subproblem max g.s + 1/2 s^T M s, |s| <= radius, for
/// symmetric M (Lagrange-multiplier secular equation, safeguarded).
Vector solve_trust_region(const Vector& g, const Matrix& M, double radius);

/// Sphere-constrained ascent from u_start. Steps move to (u + xi)/|u + xi|
/// and are kept only when the true objective rises by at least delta / 2.
/// A rejected candidate step is retried once with the exact solver.
AscentTrace local_opt(const SmoothFunction& obj, const Vector& u_start, const LocalSearchParams& params);

}  // namespace nica
