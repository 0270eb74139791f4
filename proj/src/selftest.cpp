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

#include "nica/selftest.hpp"

#include "nica/allopt.hpp"
#include "nica/evalmatch.hpp"
#include "nica/pipeline.hpp"
#include "nica/quasiwhiten.hpp"
#include "nica/recover.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace nica {

namespace {

Vector random_unit(Index n, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  Vector u(n);
  for (Index i = 0; i < n; ++i) u(i) = normal(gen);
  return u / u.norm();
}

Vector random_weights(Index n, double lo, double hi, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> unif(lo, hi);
  Vector d(n);
  for (Index i = 0; i < n; ++i) d(i) = unif(gen);
  return d;
}

// Distance of each found vector to its closest +-R_i, requiring distinct i.
double max_column_error(const Matrix& found, const Matrix& R, bool& distinct) {
  const Index n = R.cols();
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  double worst = 0.0;
  distinct = true;
  for (Index j = 0; j < found.cols(); ++j) {
    Index best = 0;
    double best_err = 1e300;
    for (Index i = 0; i < n; ++i) {
      const double e = std::min((found.col(j) - R.col(i)).norm(), (found.col(j) + R.col(i)).norm());
      if (e < best_err) {
        best_err = e;
        best = i;
      }
    }
    if (used[static_cast<std::size_t>(best)]) distinct = false;
    used[static_cast<std::size_t>(best)] = true;
    worst = std::max(worst, best_err);
  }
  return worst;
}

SelfTestResult derivative_suite() {
  auto gen = make_stream(11, "selftest");
  double worst_g = 0.0, worst_h = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 2 + trial % 5;
    const QuarticObjective f = analytic_oracle(random_weights(n, 0.5, 3.0, gen), random_orthogonal(n, gen));
    const Vector u = random_unit(n, gen);
    const ObjectiveEvaluation e = f.evaluate(u);
    const double h = 1e-5 * (1.0 + u.norm());
    Vector g_fd(n);
    Matrix h_fd(n, n);
    for (Index k = 0; k < n; ++k) {
      const Vector step = h * Vector::Unit(n, k);
      g_fd(k) = (f.value(u + step) - f.value(u - step)) / (2 * h);
      h_fd.col(k) = (f.evaluate(u + step).gradient - f.evaluate(u - step).gradient) / (2 * h);
    }
    worst_g = std::max(worst_g, (g_fd - e.gradient).norm() / std::max(1.0, e.gradient.norm()));
    worst_h = std::max(worst_h, (h_fd - e.hessian).norm() / std::max(1.0, e.hessian.norm()));
  }
  std::ostringstream d;
  d << "gradient rel err " << worst_g << ", hessian rel err " << worst_h;
  return {"oracle derivatives vs finite differences", worst_g <= 1e-6 && worst_h <= 1e-5, d.str()};
}

SelfTestResult allopt_suite(bool strict) {
  const Index n = strict ? 4 : 6;
  const int seeds = 5;
  double worst = 0.0, worst_dots = 0.0, tol = 1e-4;
  bool all_distinct = true, failed = false;
  for (int s = 0; s < seeds; ++s) {
    auto gen = make_stream(static_cast<std::uint64_t>(s), "selftest-allopt");
    const Vector d = random_weights(n, 1.0, strict ? 2.0 : 4.0, gen);
    const Matrix R = random_orthogonal(n, gen);
    const QuarticObjective f = analytic_oracle(d, R);
    LocalSearchParams full{1e-2, 1e-10, 100000, StepSolver::CandidateSet};
    LocalSearchParams proj{5e-2, 1e-9, 100000, StepSolver::CandidateSet};
    if (strict) {
      std::tie(full, proj) = strict_parameters(d.minCoeff(), d.maxCoeff(), n, 1e-2, 100000);
      tol = 3.0 * std::sqrt(static_cast<double>(n)) * full.beta;
    }
    const MaximaSet m = all_opt(f, full, proj, static_cast<std::uint64_t>(s));
    bool distinct = true;
    worst = std::max(worst, max_column_error(m.as_matrix(), R, distinct));
    worst_dots = std::max(worst_dots, m.pairwise_dots);
    all_distinct = all_distinct && distinct;
    failed = failed || m.failed;
  }
  std::ostringstream d;
  d << "n=" << n << ", " << seeds << " seeds, max column error " << worst << " (tol " << tol
    << "), max pairwise |dot| " << worst_dots;
  return {strict ? "AllOPT on analytic oracles (strict parameters)" : "AllOPT on analytic oracles",
          !failed && all_distinct && worst <= tol && worst_dots <= tol, d.str()};
}

SelfTestResult recover_constant_suite() {
  const GroundTruth gt = make_ground_truth(3, 2.0, 0.0, SourceDistribution::Rademacher, 5);
  const Vector u0 = pick_u0(3, 9);
  const Vector D = diag_weights(gt.A, u0);
  const Matrix H = gt.A * D.asDiagonal() * gt.A.transpose();
  const PsdFactor f = factor_psd(H);
  QuasiWhitening q;
  q.u0 = u0;
  q.H_hat = H;
  q.B = f.B;
  q.B_inv = f.B_inv;
  const QuarticObjective white = population_objective(f.B_inv * gt.A, source_kurtosis(gt.source));
  Matrix R = f.B_inv * gt.A * D.cwiseSqrt().asDiagonal();
  const Matrix C = gt.A * gt.A.transpose();
  const RecoveredModel m = recover_model(q, white, R, C);
  double rel = 0.0;
  for (Index i = 0; i < 3; ++i) rel = std::max(rel, std::abs(m.D_hat(i) - D(i)) / D(i));
  std::ostringstream d;
  d << "max relative D error " << rel << ", |A_hat - A|_F " << (m.A_hat - gt.A).norm();
  return {"recovery constant in the exact limit", rel <= 1e-6, d.str()};
}

SelfTestResult matching_suite() {
  auto gen = make_stream(5, "selftest-match");
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 2 + trial % 4;
    Matrix a(n, n), b(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        a(i, j) = normal(gen);
        b(i, j) = normal(gen);
      }
    const MatchResult r = match_columns(b, a);
    std::vector<Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    double best = 1e300;
    do {
      double total = 0.0;
      for (Index j = 0; j < n; ++j) {
        const auto col = b.col(perm[static_cast<std::size_t>(j)]);
        total += std::min((col - a.col(j)).squaredNorm(), (col + a.col(j)).squaredNorm());
      }
      best = std::min(best, std::sqrt(total));
    } while (std::next_permutation(perm.begin(), perm.end()));
    worst = std::max(worst, std::abs(best - r.frob_error));
  }
  std::ostringstream d;
  d << "max |assignment - exhaustive| " << worst;
  return {"matching optimality", worst <= 1e-12, d.str()};
}

}  // namespace

std::vector<SelfTestResult> run_selftest(bool strict_params) {
  std::vector<SelfTestResult> out;
  auto guarded = [&](auto&& suite) {
    try {
      out.push_back(suite());
    } catch (const std::exception& e) {
      out.push_back({"suite raised an exception", false, e.what()});
    }
  };
  guarded(derivative_suite);
  guarded([&] { return allopt_suite(strict_params); });
  guarded(recover_constant_suite);
  guarded(matching_suite);
  return out;
}

}  // namespace nica
