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

#include "nica/pipeline.hpp"

#include <cmath>
#include <sstream>

namespace nica {

void PipelineConfig::validate() const {
  params_full.validate();
  params_proj.validate();
  if (!(params_proj.delta >= 10.0 * params_full.delta)) {
    std::ostringstream msg;
    msg << "config violates delta' >= 10 * delta: params_proj.delta (" << params_proj.delta
        << ") must be at least 10 * params_full.delta (" << params_full.delta << ")";
    throw InvalidArgument(msg.str());
  }
  require(eig_floor_ratio > 0.0 && eig_floor_ratio < 1.0, "config: eig_floor_ratio must lie in (0, 1)");
  require(n_pairs >= 0, "config: n_pairs must be >= 0");
  require(strict_gamma > 0.0, "config: strict_gamma must be positive");
}

namespace {

json params_to_json(const LocalSearchParams& p) {
  return json{{"beta", p.beta}, {"delta", p.delta}, {"max_iters", p.max_iters}, {"solver", to_string(p.solver)}};
}

LocalSearchParams params_from_json(const json& j, LocalSearchParams p) {
  p.beta = j.value("beta", p.beta);
  p.delta = j.value("delta", p.delta);
  p.max_iters = j.value("max_iters", p.max_iters);
  if (j.contains("solver")) p.solver = parse_solver(j.at("solver").get<std::string>());
  return p;
}

json trace_to_json(const AscentTrace& t) {
  return json{{"iterations", t.iterations},
              {"accepted_steps", t.improvements.size()},
              {"exact_fallbacks", t.exact_fallbacks},
              {"final_value", t.final_value},
              {"stop_reason", to_string(t.stop_reason)}};
}

template <class F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(name, e.what());
  }
}

}  // namespace

json config_to_json(const PipelineConfig& cfg) {
  return json{{"seed", cfg.seed},
              {"n_pairs", cfg.n_pairs},
              {"eig_floor_ratio", cfg.eig_floor_ratio},
              {"params_full", params_to_json(cfg.params_full)},
              {"params_proj", params_to_json(cfg.params_proj)},
              {"strict_params", cfg.strict_params},
              {"strict_gamma", cfg.strict_gamma},
              {"source", to_string(cfg.source)},
              {"paper_literal_constant", cfg.paper_literal_constant},
              {"psd_project", cfg.psd_project},
              {"deterministic_parallel", cfg.deterministic_parallel},
              {"threads", cfg.threads}};
}

PipelineConfig config_from_json(const json& j) {
  PipelineConfig cfg;
  try {
    require(j.is_object(), "config must be a JSON object");
    cfg.seed = j.value("seed", cfg.seed);
    cfg.n_pairs = j.value("n_pairs", cfg.n_pairs);
    cfg.eig_floor_ratio = j.value("eig_floor_ratio", cfg.eig_floor_ratio);
    if (j.contains("params_full")) cfg.params_full = params_from_json(j.at("params_full"), cfg.params_full);
    if (j.contains("params_proj")) cfg.params_proj = params_from_json(j.at("params_proj"), cfg.params_proj);
    cfg.strict_params = j.value("strict_params", cfg.strict_params);
    cfg.strict_gamma = j.value("strict_gamma", cfg.strict_gamma);
    if (j.contains("source")) cfg.source = parse_source(j.at("source").get<std::string>());
    cfg.paper_literal_constant = j.value("paper_literal_constant", cfg.paper_literal_constant);
    cfg.psd_project = j.value("psd_project", cfg.psd_project);
    cfg.deterministic_parallel = j.value("deterministic_parallel", cfg.deterministic_parallel);
    cfg.threads = j.value("threads", cfg.threads);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config JSON: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::pair<LocalSearchParams, LocalSearchParams> strict_parameters(double d_min, double d_max, Index n,
                                                                  double gamma, Index max_iters) {
  require(d_min > 0.0 && d_max >= d_min, "strict_parameters: need 0 < d_min <= d_max");
  require(n >= 2 && gamma > 0.0, "strict_parameters: need n >= 2 and gamma > 0");
  const double r = d_min / d_max;
  const double nd = static_cast<double>(n);
  LocalSearchParams full, proj;
  proj.beta = 0.25 * r * r;
  full.beta = std::min(gamma / std::sqrt(nd), std::pow(r, 4) * std::pow(nd, -3.5));
  full.delta = d_min * full.beta * full.beta / (100.0 * nd);
  proj.delta = d_min * proj.beta * proj.beta / (100.0 * nd);
  // Fixed-length steps need about 1/beta iterations to cross the sphere.
  full.max_iters = std::max(max_iters, static_cast<Index>(std::ceil(20.0 / full.beta)));
  proj.max_iters = std::max(max_iters, static_cast<Index>(std::ceil(20.0 / proj.beta)));
  return {full, proj};
}

PipelineResult run_pipeline(const SampleSet& data, const PipelineConfig& cfg, const ProgressSink& progress) {
  cfg.validate();
  auto emit = [&](json j) {
    if (progress) progress(j);
  };
  const ReductionOptions red = cfg.reduction();
  const Index n = data.dim();
  if (n < 2) throw PipelineError("input", "data dimension must be >= 2");

  PipelineResult r;
  r.mean_check = check_sample_mean(data);
  emit({{"stage", "input"},
        {"n", n},
        {"pairs", data.pairs()},
        {"mean_norm", r.mean_check.mean_norm},
        {"mean_warning", r.mean_check.warn}});

  r.whitening = stage("quasi_whiten", [&] { return quasi_whiten(data, cfg.seed, cfg.eig_floor_ratio, red); });
  emit({{"stage", "quasi_whiten"},
        {"floored_eigs", r.whitening.floored_eigen_count},
        {"floor_applied", r.whitening.floor_applied}});
  if (r.whitening.floor_applied)
    emit({{"stage", "quasi_whiten"},
          {"warning", "Hessian estimate needed eigenvalue flooring; consider more samples or another seed"}});

  const QuarticObjective white = stage("whiten_objective", [&] { return whiten_objective(data, r.whitening.B_inv, red); });

  r.maxima = stage("all_opt", [&] { return all_opt(white, cfg.params_full, cfg.params_proj, cfg.seed); });
  if (cfg.strict_params) {
    r.strict = stage("strict_params", [&] {
      Vector d(n);
      for (Index i = 0; i < n; ++i) d(i) = white.value(r.maxima.vectors[static_cast<std::size_t>(i)]);
      if (!(d.minCoeff() > 0.0)) throw ModelError("first-pass objective values are not all positive");
      const Index cap = std::max(cfg.params_full.max_iters, cfg.params_proj.max_iters);
      return strict_parameters(d.minCoeff(), d.maxCoeff(), n, cfg.strict_gamma, cap);
    });
    emit({{"stage", "strict_params"},
          {"params_full", params_to_json(r.strict->first)},
          {"params_proj", params_to_json(r.strict->second)}});
    r.maxima = stage("all_opt", [&] { return all_opt(white, r.strict->first, r.strict->second, cfg.seed); });
  }
  for (std::size_t i = 0; i < r.maxima.traces.size(); ++i) {
    json line{{"stage", "all_opt"}, {"maximum", i + 1}, {"refine", trace_to_json(r.maxima.traces[i].second)}};
    if (i > 0) line["projected"] = trace_to_json(r.maxima.traces[i].first);
    emit(line);
  }
  for (const auto& d : r.maxima.diagnostics) emit({{"stage", "all_opt"}, {"warning", d}});
  if (r.maxima.failed) throw PipelineError("all_opt", "local search did not converge; see diagnostics");

  RecoverOptions ropts;
  ropts.source_kurtosis = source_kurtosis(cfg.source);
  ropts.paper_literal_constant = cfg.paper_literal_constant;
  ropts.psd_project = cfg.psd_project;
  ropts.reduction = red;
  r.model = stage("recover", [&] { return recover_model(r.whitening, white, r.maxima.as_matrix(), data, ropts); });
  emit({{"stage", "recover"},
        {"r_orthogonality", r.model.diagnostics.r_orthogonality},
        {"sigma_min_eig", r.model.diagnostics.sigma_min_eig}});
  return r;
}

json result_to_json(const PipelineResult& r) {
  json j = recovered_to_json(r.model);
  j["quasi_whitening"] = {{"u0", vector_to_json(r.whitening.u0)},
                          {"H_hat", matrix_to_json(r.whitening.H_hat)},
                          {"B", matrix_to_json(r.whitening.B)},
                          {"B_inv", matrix_to_json(r.whitening.B_inv)},
                          {"floor_applied", r.whitening.floor_applied},
                          {"floored_eigen_count", r.whitening.floored_eigen_count}};
  json maxima = json::array();
  for (std::size_t i = 0; i < r.maxima.traces.size(); ++i) {
    json m{{"vector", vector_to_json(r.maxima.vectors[i])},
           {"nudged", static_cast<bool>(r.maxima.nudged[i])},
           {"refine", trace_to_json(r.maxima.traces[i].second)}};
    if (i > 0) m["projected"] = trace_to_json(r.maxima.traces[i].first);
    maxima.push_back(m);
  }
  j["maxima"] = maxima;
  j["diagnostics"]["pairwise_dots"] = r.maxima.pairwise_dots;
  j["diagnostics"]["mean_warning"] = r.mean_check.warn;
  j["diagnostics"]["drifted_maxima"] = r.maxima.drifted;
  return j;
}

}  // namespace nica
