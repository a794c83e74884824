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


#ifndef OCCAM_HARNESS_ATTENTION_EXPERIMENTS_HPP_
#define OCCAM_HARNESS_ATTENTION_EXPERIMENTS_HPP_

#include <algorithm>
#include <string>
#include <vector>

#include "occam/attention.hpp"
#include "occam/harness/experiment.hpp"

namespace occam::harness {

inline Experiment attention_verify_experiment() {
  Experiment e;
  e.name = "attention-verify";
  e.summary = "conditional-table error of the two-layer bigram extractor on random order-1 sequences";
  e.default_trials = 50;
  e.trials_help = "random sequences";
  e.params = {
      {"vocab_size", ParamKind::kInt, 3, "alphabet size V", 2},
      {"length", ParamKind::kInt, 200, "sequence length T", 3},
      {"c", ParamKind::kDoubleList, Json::array({10, 20, 40, 80}), "attention saturation values", 0},
      {"literal", ParamKind::kBool, true, "also report the variant whose layer-2 heads see position 1", 0},
  };
  e.run = [](const RunContext& ctx) {
    using namespace attention;
    const auto v = get_size(ctx.params, "vocab_size");
    const auto length = get_size(ctx.params, "length");
    auto cs = get_doubles(ctx.params, "c");
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    if (cs.empty()) throw ConfigError("params.c", "needs at least one value");
    for (double c : cs)
      if (!(c > 0)) throw ConfigError("params.c", "values must be positive");
    std::vector<std::pair<std::string, bool>> variants = {{"masked", true}};
    if (get_bool(ctx.params, "literal")) variants.emplace_back("literal", false);

    std::vector<std::vector<AttentionStack>> stacks(cs.size());
    for (std::size_t i = 0; i < cs.size(); ++i)
      for (const auto& [name, mask] : variants) stacks[i].push_back(build_bigram_extractor(v, cs[i], {mask}));

    const auto results = map_trials(ctx, 0, "attention", ctx.trials, [&](Rng& rng, std::size_t) {
      const markov::MarkovProcess chain = markov::sample_chain(rng, 1, v);
      const markov::TokenSequence seq = markov::generate_sequence(rng, chain, length);
      std::vector<VerifyReport> out;
      for (const auto& per_c : stacks)
        for (const AttentionStack& s : per_c) out.push_back(verify_on(s, seq));
      return out;
    });

    Table trials("trials", {int_col("trial"), real_col("c"), text_col("variant"), real_col("max_abs_error"),
                            int_col("excluded_rows"), real_col("residual_magnitude"), real_col("min_entry"),
                            real_col("max_entry")});
    Table summary("summary", {real_col("c"), text_col("variant"), int_col("trials"), real_col("mean_error"),
                              real_col("max_error")});
    std::vector<std::vector<double>> errs(cs.size() * variants.size());
    for (std::size_t j = 0; j < results.size(); ++j) {
      for (std::size_t i = 0; i < cs.size(); ++i) {
        for (std::size_t k = 0; k < variants.size(); ++k) {
          const VerifyReport& r = results[j][i * variants.size() + k];
          trials.add_row({as_int(j), cs[i], variants[k].first, r.max_abs_error, as_int(r.excluded_rows.size()),
                          r.residual_magnitude, r.min_entry, r.max_entry});
          errs[i * variants.size() + k].push_back(r.max_abs_error);
        }
      }
    }
    for (std::size_t i = 0; i < cs.size(); ++i) {
      for (std::size_t k = 0; k < variants.size(); ++k) {
        const auto& x = errs[i * variants.size() + k];
        summary.add_row({cs[i], variants[k].first, as_int(x.size()), mean_of(x),
                         x.empty() ? std::numeric_limits<double>::quiet_NaN() : *std::max_element(x.begin(), x.end())});
      }
    }
    return std::vector<Table>{std::move(trials), std::move(summary)};
  };
  return e;
}

}  // namespace occam::harness

#endif  // OCCAM_HARNESS_ATTENTION_EXPERIMENTS_HPP_
