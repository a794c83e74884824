// Copyright 2026 The occam-icl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef OCCAM_HARNESS_RUN_HPP_
#define OCCAM_HARNESS_RUN_HPP_

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "occam/harness/attention_experiments.hpp"
#include "occam/harness/boolean_experiments.hpp"
#include "occam/harness/config.hpp"
#include "occam/harness/experiment.hpp"
#include "occam/harness/markov_experiments.hpp"
#include "occam/harness/pcfg_experiments.hpp"
#include "occam/harness/regression_experiments.hpp"
#include "occam/harness/report.hpp"

#ifndef OCCAM_ICL_VERSION
#define OCCAM_ICL_VERSION "0.0.0"
#endif

namespace occam::harness {

inline constexpr const char* kVersion = OCCAM_ICL_VERSION;

/// Every experiment, in CLI listing order.
inline const std::vector<Experiment>& experiments() {
  static const std::vector<Experiment> all = {
      markov_posterior_experiment(), markov_ctx_sweep_experiment(), regression_posterior_experiment(),
      regression_ctx_sweep_experiment(), wishart_gap_experiment(), pcfg_experiment(),
      attention_verify_experiment(), boolean_oracle_experiment(), llm_probe_experiment(),
  };
  return all;
}

inline const Experiment& find_experiment(const std::string& name) {
  for (const Experiment& e : experiments())
    if (e.name == name) return e;
  std::string known;
  for (const Experiment& e : experiments()) known += (known.empty() ? "" : ", ") + e.name;
  throw ConfigError("experiment", "unknown experiment '" + name + "' (known: " + known + ")");
}

/// Fills defaults; the returned config is what the report echoes.
inline ExperimentConfig resolve(const ExperimentConfig& config) {
  const Experiment& e = find_experiment(config.experiment);
  ExperimentConfig out = config;
  if (out.trials == 0) out.trials = e.default_trials;
  if (out.threads == 0) out.threads = resolve_thread_count(0);
  out.params = resolve_params(e.params, config.params);
  return out;
}

inline Report run_experiment(const ExperimentConfig& config) {
  const ExperimentConfig resolved = resolve(config);
  const Experiment& e = find_experiment(resolved.experiment);
  RunContext ctx{resolved.seed, resolved.trials, resolved.threads, resolved.params};
  const auto start = std::chrono::steady_clock::now();
  Report r;
  r.experiment = e.name;
  r.version = kVersion;
  r.config = resolved.to_json();
  r.tables = e.run(ctx);
  r.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

/// Runs and writes report.json plus one CSV per table into out_dir.
inline Report run(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
  Report r = run_experiment(config);
  write_report(r, out_dir);
  return r;
}

}  // namespace occam::harness

#endif  // OCCAM_HARNESS_RUN_HPP_
