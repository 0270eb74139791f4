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

#include "nica/io.hpp"
#include "nica/pipeline.hpp"
#include "nica/selftest.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace {

using nica::json;

std::mutex log_mutex;

void log_line(const json& j) {
  std::lock_guard<std::mutex> lock(log_mutex);
  std::cerr << j.dump() << '\n';
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::vector<nica::Index> parse_grid(const std::string& grid) {
  std::vector<nica::Index> out;
  std::stringstream ss(grid);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    const double v = std::stod(item, &pos);
    nica::require(pos == item.size() && v >= 1.0, "bench: bad grid entry '" + item + "'");
    out.push_back(static_cast<nica::Index>(std::llround(v)));
  }
  nica::require(!out.empty(), "bench: empty grid");
  return out;
}

int cmd_gen(nica::Index n, nica::Index pairs, double cond, double noise, const std::string& dist,
            std::uint64_t seed, const std::string& out_model, const std::string& out_data) {
  const nica::GroundTruth gt = nica::make_ground_truth(n, cond, noise, nica::parse_source(dist), seed);
  nica::write_json_file(out_model, nica::ground_truth_to_json(gt));
  log_line({{"stage", "gen"}, {"model", out_model}});
  nica::write_samples(out_data, nica::sample_dataset(gt, pairs, seed));
  log_line({{"stage", "gen"}, {"data", out_data}, {"pairs", pairs}});
  return 0;
}

int cmd_run(const std::string& data, const std::string& config, const std::string& out) {
  const nica::PipelineConfig cfg =
      config.empty() ? nica::PipelineConfig{} : nica::config_from_json(nica::read_json_file(config));
  const nica::SampleSet s = nica::read_samples(data);
  const nica::PipelineResult r = nica::run_pipeline(s, cfg, log_line);
  nica::write_json_file(out, nica::result_to_json(r));
  return 0;
}

int cmd_eval(const std::string& est, const std::string& truth, const std::string& out) {
  const nica::RecoveredModel m = nica::recovered_from_json(nica::read_json_file(est));
  const nica::GroundTruth gt = nica::read_ground_truth(truth);
  const json report = nica::report_to_json(nica::evaluate_recovery(m, gt));
  nica::write_json_file(out, report);
  log_line({{"stage", "eval"}, {"frob_error_A", report["frob_error_A"]},
            {"frob_error_Sigma", report["frob_error_Sigma"]}});
  return 0;
}

struct BenchRow {
  nica::Index n_pairs = 0;
  int seeds = 0;
  int failures = 0;
  double frob_A = 0.0;
  double rel_A = 0.0;
  double frob_Sigma = 0.0;
};

int cmd_bench(const std::string& config, const std::string& grid, const std::string& out) {
  const json j = nica::read_json_file(config);
  nica::require(j.contains("model"), "bench config needs a \"model\" object");
  const json& mj = j.at("model");
  const nica::GroundTruth gt =
      nica::make_ground_truth(mj.value("n", 4), mj.value("cond", 2.0), mj.value("noise", 0.5),
                              nica::parse_source(mj.value("dist", std::string("rademacher"))),
                              mj.value("seed", std::uint64_t{0}));
  const int seeds = j.value("seeds", 10);
  nica::require(seeds >= 1, "bench: seeds must be >= 1");
  nica::PipelineConfig base = j.contains("pipeline") ? nica::config_from_json(j.at("pipeline")) : nica::PipelineConfig{};
  // The recovery scale follows the simulated sources unless the pipeline says otherwise.
  if (!j.contains("pipeline") || !j.at("pipeline").contains("source")) base.source = gt.source;
  const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), seeds));
  // Seeds are the unit of parallelism; keep each pipeline single-threaded.
  if (workers > 1) base.threads = 1;

  std::vector<BenchRow> rows;
  for (const nica::Index n_pairs : parse_grid(grid)) {
    std::vector<double> frob(seeds, -1.0), rel(seeds, -1.0), sig(seeds, -1.0);
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int s = next++; s < seeds; s = next++) {
        try {
          nica::PipelineConfig cfg = base;
          cfg.seed = static_cast<std::uint64_t>(s);
          const nica::SampleSet data = nica::sample_dataset(gt, n_pairs, cfg.seed);
          const nica::PipelineResult r = nica::run_pipeline(data, cfg);
          const nica::EvaluationReport rep = nica::evaluate_recovery(r.model, gt);
          frob[s] = rep.frob_error_A;
          rel[s] = rep.relative_error_A;
          sig[s] = rep.frob_error_Sigma;
          log_line({{"stage", "bench"}, {"n_pairs", n_pairs}, {"seed", s}, {"frob_error_A", rep.frob_error_A},
                    {"frob_error_Sigma", rep.frob_error_Sigma}});
        } catch (const std::exception& e) {
          log_line({{"stage", "bench"}, {"n_pairs", n_pairs}, {"seed", s}, {"error", e.what()}});
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    BenchRow row{n_pairs, seeds, 0, 0.0, 0.0, 0.0};
    std::vector<double> f, r, g;
    for (int s = 0; s < seeds; ++s) {
      if (frob[s] < 0.0) {
        ++row.failures;
        continue;
      }
      f.push_back(frob[s]);
      r.push_back(rel[s]);
      g.push_back(sig[s]);
    }
    row.frob_A = median(f);
    row.rel_A = median(r);
    row.frob_Sigma = median(g);
    rows.push_back(row);
  }

  std::ofstream csv(out);
  nica::require(static_cast<bool>(csv), "cannot open '" + out + "' for writing");
  csv << "n_pairs,seeds,failures,median_frob_error_A,median_relative_error_A,median_frob_error_Sigma\n";
  csv.precision(10);
  for (const auto& row : rows)
    csv << row.n_pairs << ',' << row.seeds << ',' << row.failures << ',' << row.frob_A << ',' << row.rel_A << ','
        << row.frob_Sigma << '\n';
  return std::all_of(rows.begin(), rows.end(), [](const BenchRow& r) { return r.failures < r.seeds; }) ? 0 : 1;
}

int cmd_selftest(bool strict) {
  bool ok = true;
  for (const auto& r : nica::run_selftest(strict)) {
    std::cout << (r.pass ? "PASS  " : "FAIL  ") << r.name << ": " << r.detail << '\n';
    ok = ok && r.pass;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noisy ICA by cumulant denoising, quasi-whitening and local search"};
  app.require_subcommand(1);

  nica::Index n = 4, pairs = 100000;
  double cond = 2.0, noise = 0.5;
  std::string dist = "rademacher", out_model, out_data;
  std::uint64_t seed = 0;
  auto* gen = app.add_subcommand("gen", "Sample a ground-truth model and a dataset");
  gen->add_option("--n", n, "Dimension")->check(CLI::Range(2, 64));
  gen->add_option("--pairs", pairs, "Number of sample pairs")->check(CLI::PositiveNumber);
  gen->add_option("--cond", cond, "Condition number of A")->check(CLI::Range(1.0, 1e12));
  gen->add_option("--noise", noise, "Noise scale")->check(CLI::NonNegativeNumber);
  gen->add_option("--dist", dist, "Source law")->check(CLI::IsMember({"rademacher", "uniform"}));
  gen->add_option("--seed", seed, "Root seed");
  gen->add_option("--out-model", out_model, "Ground-truth JSON")->required();
  gen->add_option("--out-data", out_data, "Samples CSV")->required();

  std::string data, config, out;
  auto* run = app.add_subcommand("run", "Estimate A and Sigma from samples");
  run->add_option("--data", data, "Samples CSV")->required()->check(CLI::ExistingFile);
  run->add_option("--config", config, "Pipeline config JSON")->check(CLI::ExistingFile);
  run->add_option("--out", out, "Result JSON")->required();

  std::string est, truth;
  auto* eval = app.add_subcommand("eval", "Score an estimate against the ground truth");
  eval->add_option("--est", est, "Result JSON from run")->required()->check(CLI::ExistingFile);
  eval->add_option("--truth", truth, "Ground-truth JSON from gen")->required()->check(CLI::ExistingFile);
  eval->add_option("--out", out, "Report JSON")->required();

  std::string grid = "100000,400000";
  auto* bench = app.add_subcommand("bench", "Median errors over seeds for a grid of sample sizes");
  bench->add_option("--config", config, "Bench config JSON")->required()->check(CLI::ExistingFile);
  bench->add_option("--grid", grid, "Comma-separated pair counts");
  bench->add_option("--out", out, "CSV output")->required();

  bool strict = false;
  auto* self = app.add_subcommand("selftest", "Exact-oracle checks without sampling");
  self->add_flag("--strict-params", strict, "Use the theory-shaped search parameters");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen(n, pairs, cond, noise, dist, seed, out_model, out_data);
    if (*run) return cmd_run(data, config, out);
    if (*eval) return cmd_eval(est, truth, out);
    if (*bench) return cmd_bench(config, grid, out);
    if (*self) return cmd_selftest(strict);
  } catch (const nica::PipelineError& e) {
    log_line({{"error", e.what()}, {"stage", e.stage()}});
    return 2;
  } catch (const std::exception& e) {
    log_line({{"error", e.what()}});
    return 2;
  }
  return 1;
}
