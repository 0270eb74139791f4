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

#include "nica/localsearch.hpp"

#include <cassert>
#include <cmath>
#include <limits>

namespace nica {

std::string to_string(StepSolver solver) {
  return solver == StepSolver::CandidateSet ? "candidate" : "exact";
}

StepSolver parse_solver(const std::string& name) {
  if (name == "candidate") return StepSolver::CandidateSet;
  if (name == "exact") return StepSolver::ExactTrustRegion;
  throw InvalidArgument("unknown step solver '" + name + "' (expected candidate|exact)");
}

std::string to_string(StopReason reason) {
  return reason == StopReason::NoImprovingStep ? "no_improving_step" : "max_iters";
}

void LocalSearchParams::validate() const {
  require(beta > 0.0 && beta < 1.0, "LocalSearchParams: beta must lie in (0, 1)");
  require(delta > 0.0, "LocalSearchParams: delta must be positive");
  require(max_iters >= 1, "LocalSearchParams: max_iters must be >= 1");
}

Matrix tangent_basis(const Vector& u) {
  const Index n = u.size();
  Eigen::HouseholderQR<Matrix> qr{Matrix(u)};
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  return q.rightCols(n - 1);
}

double model_gain(const ObjectiveEvaluation& eval, const Vector& u, const Vector& xi) {
  (void)u;
  return eval.gradient.dot(xi) + 0.5 * xi.dot(eval.hessian * xi) -
         0.5 * eval.radial_derivative * xi.squaredNorm();
}

namespace {

struct TangentModel {
  Matrix basis;
  Vector g;
  Matrix M;
};

TangentModel tangent_model(const ObjectiveEvaluation& eval, const Vector& u) {
  TangentModel t;
  t.basis = tangent_basis(u);
  t.g = t.basis.transpose() * eval.gradient;
  t.M = t.basis.transpose() * eval.hessian * t.basis;
  t.M.diagonal().array() -= eval.radial_derivative;
  t.M = (0.5 * (t.M + t.M.transpose())).eval();
  return t;
}

double quad(const Vector& g, const Matrix& M, const Vector& s) { return g.dot(s) + 0.5 * s.dot(M * s); }

}  // namespace

Vector solve_trust_region(const Vector& g, const Matrix& M, double radius) {
  const Index m = g.size();
  if (m == 0) return Vector::Zero(0);
  // Minimize c.s + 1/2 s^T K s with c = -g, K = -M. In the eigenbasis of K,
  // s(lambda) = sum_i a_i / (kappa_i + lambda) v_i with a = V^T g.
  Eigen::SelfAdjointEigenSolver<Matrix> es(-M);
  const Vector kappa = es.eigenvalues();  // ascending
  const Matrix& V = es.eigenvectors();
  const Vector a = V.transpose() * g;
  const double kappa_min = kappa(0);
  const double scale = std::max({kappa.cwiseAbs().maxCoeff(), a.norm() / radius,
                                 std::numeric_limits<double>::min()});

  auto step_norm = [&](double lambda) {
    double s2 = 0.0;
    for (Index i = 0; i < m; ++i) {
      const double den = kappa(i) + lambda;
      if (den <= 0.0) return std::numeric_limits<double>::infinity();
      s2 += (a(i) / den) * (a(i) / den);
    }
    return std::sqrt(s2);
  };
  auto step_at = [&](double lambda) {
    Vector c(m);
    for (Index i = 0; i < m; ++i) c(i) = a(i) / (kappa(i) + lambda);
    return Vector(V * c);
  };

  if (kappa_min > 0.0 && step_norm(0.0) <= radius) return step_at(0.0);

  const double lambda_lo = std::max(0.0, -kappa_min);
  const double probe = lambda_lo + 1e-12 * scale;
  if (step_norm(probe) < radius) {
    // Hard case: the gradient has (numerically) no weight on the bottom
    // eigenspace of K; move along it to reach the boundary.
    const double tol = 1e-12 * scale;
    Vector c = Vector::Zero(m);
    for (Index i = 0; i < m; ++i)
      if (kappa(i) > kappa_min + tol) c(i) = a(i) / (kappa(i) + lambda_lo);
    Vector partial = V * c;
    const double tau = std::sqrt(std::max(0.0, radius * radius - partial.squaredNorm()));
    Vector plus = partial + tau * V.col(0);
    Vector minus = partial - tau * V.col(0);
    return quad(g, M, minus) > quad(g, M, plus) ? minus : plus;
  }

  // Secular equation 1/|s(lambda)| = 1/radius on (probe, hi]; phi is
  // increasing and nearly linear, so Newton converges fast. Bisection keeps
  // the iterate bracketed.
  double lo = probe;
  double hi = std::max(probe, a.norm() / radius - kappa_min) + scale * 1e-12 + 1e-300;
  while (step_norm(hi) > radius) hi = 2.0 * hi + scale;
  double lambda = hi;
  for (int it = 0; it < 200; ++it) {
    const double norm = step_norm(lambda);
    const double phi = 1.0 / norm - 1.0 / radius;
    if (std::abs(norm - radius) <= 1e-13 * radius) break;
    if (phi < 0.0)
      lo = lambda;
    else
      hi = lambda;
    // d|s|/dlambda = -sum a_i^2/(k_i+l)^3 / |s|
    double w = 0.0;
    for (Index i = 0; i < m; ++i) {
      const double den = kappa(i) + lambda;
      w += a(i) * a(i) / (den * den * den);
    }
    const double dphi = w / (norm * norm * norm);
    double next = lambda - phi / dphi;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    lambda = next;
    if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
  }
  Vector s = step_at(lambda);
  const double norm = s.norm();
  if (norm > radius) s *= radius / norm;
  return s;
}

Vector propose_step(const ObjectiveEvaluation& eval, const Vector& u, double beta, StepSolver solver) {
  require(u.size() == eval.gradient.size(), "propose_step: dimension mismatch");
  require(std::abs(u.norm() - 1.0) <= 1e-8, "propose_step: u must be a unit vector");
  require(beta > 0.0, "propose_step: beta must be positive");
  const Index n = u.size();
  if (n < 2) return Vector::Zero(n);

  const TangentModel t = tangent_model(eval, u);
  if (solver == StepSolver::ExactTrustRegion) {
    Vector s = solve_trust_region(t.g, t.M, beta);
    if (quad(t.g, t.M, s) <= 0.0) return Vector::Zero(n);
    return t.basis * s;
  }

  // Candidate order fixes tie-breaking: gradient candidates first.
  std::vector<Vector> candidates;
  const double gnorm = t.g.norm();
  if (gnorm > 0.0) {
    candidates.push_back(beta * t.g / gnorm);
    candidates.push_back(-beta * t.g / gnorm);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(t.M);
  const Vector top = es.eigenvectors().col(t.M.rows() - 1);
  candidates.push_back(beta * top);
  candidates.push_back(-beta * top);

  double best_gain = 0.0;
  Vector best = Vector::Zero(n - 1);
  for (const auto& c : candidates) {
    const double gain = quad(t.g, t.M, c);
    if (gain > best_gain) {
      best_gain = gain;
      best = c;
    }
  }
  return t.basis * best;
}

AscentTrace local_opt(const SmoothFunction& obj, const Vector& u_start, const LocalSearchParams& params) {
  params.validate();
  require(u_start.size() == obj.dim(), "local_opt: dimension mismatch");
  const double start_norm = u_start.norm();
  require(std::abs(start_norm - 1.0) <= 1e-8, "local_opt: u_start must be a unit vector");

  AscentTrace trace;
  Vector u = u_start / start_norm;
  double f = obj.value(u);

  auto try_step = [&](const Vector& xi, double& f_new, Vector& u_new) {
    if (xi.squaredNorm() == 0.0) return false;
    u_new = u + xi;
    u_new /= u_new.norm();
    f_new = obj.value(u_new);
    // Compare the difference: f + delta / 2 can round back to f when |f| is large.
    return f_new - f >= 0.5 * params.delta;
  };

  trace.stop_reason = StopReason::MaxIters;
  while (trace.iterations < params.max_iters) {
    ++trace.iterations;
    const ObjectiveEvaluation eval = obj.evaluate(u);
#ifndef NDEBUG
    if (obj.homogeneous_degree() > 0) {
      const double euler = obj.homogeneous_degree() * eval.value;
      assert(std::abs(eval.radial_derivative - euler) <= 1e-8 * (1.0 + std::abs(euler)));
    }
#endif
    double f_new = 0.0;
    Vector u_new;
    bool accepted = try_step(propose_step(eval, u, params.beta, params.solver), f_new, u_new);
    if (!accepted && params.solver == StepSolver::CandidateSet) {
      accepted = try_step(propose_step(eval, u, params.beta, StepSolver::ExactTrustRegion), f_new, u_new);
      if (accepted) ++trace.exact_fallbacks;
    }
    if (!accepted) {
      trace.stop_reason = StopReason::NoImprovingStep;
      break;
    }
    trace.improvements.push_back(f_new - f);
    u = std::move(u_new);
    f = f_new;
  }
  trace.final_point = u;
  trace.final_value = f;
  return trace;
}

}  // namespace nica
