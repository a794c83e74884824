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


#ifndef OCCAM_HARNESS_EXPERIMENT_HPP_
#define OCCAM_HARNESS_EXPERIMENT_HPP_

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "occam/harness/config.hpp"
#include "occam/harness/report.hpp"
#include "occam/numerics/bootstrap.hpp"
#include "occam/numerics/parallel.hpp"
#include "occam/numerics/rng.hpp"

namespace occam::harness {

/// A trial failed inside a module; names the section and trial.
class TrialError : public std::runtime_error {
 public:
  TrialError(std::string section, std::size_t trial, const std::string& what)
      : std::runtime_error(section + ", trial " + std::to_string(trial) + ": " + what),
        section_(std::move(section)),
        trial_(trial) {}
  const std::string& section() const noexcept { return section_; }
  std::size_t trial() const noexcept { return trial_; }

 private:
  std::string section_;
  std::size_t trial_;
};

/// Resolved inputs handed to an experiment body.
struct RunContext {
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t threads = 1;
  Json params;

  /// Trial j of section s draws from stream (s << 32) | j.
  Rng trial_rng(std::uint64_t section, std::uint64_t trial) const { return Rng(seed, (section << 32) | trial); }

  /// Generators for resampling, keyed apart from every trial stream.
  Rng bootstrap_rng(std::uint64_t k) const { return Rng(seed, std::numeric_limits<std::uint64_t>::max()).child(k); }
};

/// fn(rng, j) for j < n on the worker pool, results in trial order.
template <typename Fn>
auto map_trials(const RunContext& ctx, std::uint64_t section, const std::string& label, std::size_t n, Fn&& fn) {
  try {
    return parallel_map(n, ctx.threads, [&](std::size_t j) {
      Rng rng = ctx.trial_rng(section, j);
      return fn(rng, j);
    });
  } catch (const TaskError& e) {
    const std::string what = e.what();
    const auto colon = what.find(": ");
    throw TrialError(label, e.index(), colon == std::string::npos ? what : what.substr(colon + 2));
  }
}

using ExperimentFn = std::function<std::vector<Table>(const RunContext&)>;

struct Experiment {
  std::string name;
  std::string summary;
  std::size_t default_trials = 1;
  std::string trials_help;
  std::vector<ParamSpec> params;
  ExperimentFn run;
};

// ---- small aggregation helpers ------------------------------------------------

inline double fraction(const std::vector<bool>& flags) {
  if (flags.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::size_t k = 0;
  for (bool f : flags) k += f ? 1 : 0;
  return static_cast<double>(k) / static_cast<double>(flags.size());
}

inline std::vector<double> finite_only(const std::vector<double>& xs) {
  std::vector<double> out;
  for (double x : xs)
    if (std::isfinite(x)) out.push_back(x);
  return out;
}

inline std::int64_t as_int(std::size_t x) { return static_cast<std::int64_t>(x); }

inline ParamSpec bootstrap_param() {
  return {"bootstrap_resamples", ParamKind::kInt, kDefaultBootstrapResamples, "bootstrap resamples per interval", 1};
}

inline ParamSpec choice_param(std::string name, std::string def, std::string help, std::vector<std::string> choices) {
  return {std::move(name), ParamKind::kString, std::move(def), std::move(help),
          -std::numeric_limits<double>::infinity(), std::move(choices)};
}

inline std::vector<std::size_t> sorted_unique(std::vector<std::size_t> xs) {
  std::set<std::size_t> s(xs.begin(), xs.end());
  return {s.begin(), s.end()};
}

}  // namespace occam::harness

#endif  // OCCAM_HARNESS_EXPERIMENT_HPP_
