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


#ifndef OCCAM_HARNESS_BOOLEAN_EXPERIMENTS_HPP_
#define OCCAM_HARNESS_BOOLEAN_EXPERIMENTS_HPP_

#include <string>
#include <vector>

#include "occam/boolean.hpp"
#include "occam/harness/experiment.hpp"
#include "occam/llm_probe.hpp"

namespace occam::harness {

namespace boolean_detail {

inline std::string triple_text(const boolean::Triple& t) {
  return std::to_string(t[0]) + "-" + std::to_string(t[1]) + "-" + std::to_string(t[2]);
}

inline std::string bits_text(const boolean::Bits& x) {
  std::string s;
  for (auto b : x) s += static_cast<char>('0' + b);
  return s;
}

inline boolean::Mode mode_from(const std::string& s) {
  return s == "complex" ? boolean::Mode::kComplex : boolean::Mode::kAmbiguous;
}

inline boolean::TriplePolicy policy_from(const std::string& s) {
  return s == "exclude-zero" ? boolean::TriplePolicy::kExcludeZero : boolean::TriplePolicy::kInclusive;
}

/// One prompt cell per (d, n, mode), in that nesting order.
struct PromptCell {
  std::size_t d;
  std::size_t n;
  boolean::Mode mode;
};

inline std::vector<PromptCell> cells(const Json& p) {
  const auto dims = get_sizes(p, "dims");
  const auto ns = get_sizes(p, "n_examples");
  const auto modes = p.at("modes").get<std::vector<std::string>>();
  if (dims.empty()) throw ConfigError("params.dims", "needs at least one dimension");
  if (ns.empty()) throw ConfigError("params.n_examples", "needs at least one value");
  if (modes.empty()) throw ConfigError("params.modes", "needs at least one mode");
  for (std::size_t d : dims)
    if (d < 5) throw ConfigError("params.dims", "dimensions must be >= 5");
  for (const auto& m : modes)
    if (m != "ambiguous" && m != "complex") throw ConfigError("params.modes", "'" + m + "' is not ambiguous or complex");
  std::vector<PromptCell> out;
  for (std::size_t d : dims)
    for (std::size_t n : ns)
      for (const auto& m : modes) out.push_back({d, n, mode_from(m)});
  return out;
}

inline std::vector<ParamSpec> prompt_specs(Json dims, Json ns) {
  ParamSpec modes("modes", ParamKind::kStringList, Json::array({"ambiguous", "complex"}), "prompt modes",
                  -std::numeric_limits<double>::infinity(), {"ambiguous", "complex"});
  return {
      {"dims", ParamKind::kIntList, std::move(dims), "input dimensions d", 5},
      {"n_examples", ParamKind::kIntList, std::move(ns), "in-context example counts", 1},
      modes,
      choice_param("triple_policy", "inclusive", "whether majority triples may use bit 0", {"inclusive", "exclude-zero"}),
  };
}

}  // namespace boolean_detail

inline Experiment boolean_oracle_experiment() {
  Experiment e;
  e.name = "boolean-oracle";
  e.summary = "exact Bayesian hypothesis selection between copy-bit and majority-of-3 Boolean functions";
  e.default_trials = 500;
  e.trials_help = "prompts per (d, n, mode) cell";
  e.params = boolean_detail::prompt_specs(Json::array({5}), Json::array({10}));
  e.params.push_back(bootstrap_param());
  e.run = [](const RunContext& ctx) {
    using namespace boolean_detail;
    const auto cs = cells(ctx.params);
    const auto policy = policy_from(get_string(ctx.params, "triple_policy"));
    const auto resamples = get_size(ctx.params, "bootstrap_resamples");
    Table trials("trials", {int_col("d"), int_col("n_examples"), text_col("mode"), int_col("trial"), text_col("triple"),
                            text_col("query"), int_col("label"), int_col("simple_label"), int_col("complex_label"),
                            int_col("agree_simple"), int_col("agree_complex"), real_col("p_one"), real_col("margin"),
                            int_col("tie_broken"), real_col("post_simple_family"), int_col("live_simple"),
                            int_col("live_complex")});
    Table summary("summary", {int_col("d"), int_col("n_examples"), text_col("mode"), int_col("trials"),
                              real_col("agree_simple_mean"), real_col("agree_simple_lo"), real_col("agree_simple_hi"),
                              real_col("agree_complex_mean"), real_col("agree_complex_lo"), real_col("agree_complex_hi"),
                              real_col("post_simple_family_mean")});
    struct Outcome {
      boolean::BooleanPrompt prompt;
      boolean::HypothesisPosterior post;
      boolean::LabelDecision decision;
    };
    for (std::size_t sec = 0; sec < cs.size(); ++sec) {
      const PromptCell& c = cs[sec];
      const std::string label = boolean::to_string(c.mode) + " d=" + std::to_string(c.d) + " n=" + std::to_string(c.n);
      const auto outs = map_trials(ctx, sec, label, ctx.trials, [&](Rng& rng, std::size_t) {
        Outcome o{boolean::gen_prompt(rng, c.d, c.n, c.mode, policy), {}, {}};
        o.post = boolean::hypothesis_posterior(o.prompt.examples, c.d);
        o.decision = boolean::bayes_label(o.post, o.prompt.query);
        return o;
      });
      std::vector<double> simple, complex, fam;
      for (std::size_t j = 0; j < outs.size(); ++j) {
        const Outcome& o = outs[j];
        const int ys = o.prompt.query[0];
        const int yc = boolean::majority(o.prompt.query, o.prompt.triple);
        const int y = o.decision.label;
        trials.add_row({as_int(c.d), as_int(c.n), boolean::to_string(c.mode), as_int(j), triple_text(o.prompt.triple),
                        bits_text(o.prompt.query), std::int64_t{y}, std::int64_t{ys}, std::int64_t{yc},
                        std::int64_t{y == ys}, std::int64_t{y == yc}, o.decision.p_one, o.decision.margin,
                        std::int64_t{o.decision.tie_broken}, o.post.family_posterior[0], as_int(o.post.live_simple()),
                        as_int(o.post.live_complex())});
        simple.push_back(y == ys);
        complex.push_back(y == yc);
        fam.push_back(o.post.family_posterior[0]);
      }
      const MeanInterval ms = bootstrap_mean(simple, ctx.bootstrap_rng(2 * sec), resamples);
      const MeanInterval mc = bootstrap_mean(complex, ctx.bootstrap_rng(2 * sec + 1), resamples);
      summary.add_row({as_int(c.d), as_int(c.n), boolean::to_string(c.mode), as_int(outs.size()), ms.mean, ms.lo, ms.hi,
                       mc.mean, mc.lo, mc.hi, mean_of(fam)});
    }
    return std::vector<Table>{std::move(trials), std::move(summary)};
  };
  return e;
}

inline constexpr const char* kBuiltinOracleEndpoint = "builtin:oracle";

inline Experiment llm_probe_experiment() {
  Experiment e;
  e.name = "llm-probe";
  e.summary = "render Boolean prompts, query a chat-completions endpoint, and score simple/complex agreement";
  e.default_trials = 50;
  e.trials_help = "prompts per (d, n, mode) cell";
  e.params = boolean_detail::prompt_specs(Json::array({5, 6, 7}), Json::array({2, 5, 10, 20}));
  const llm_probe::ProbeConfig def;
  e.params.insert(e.params.end(), {
      {"endpoint_url", ParamKind::kString, kBuiltinOracleEndpoint,
       "chat-completions URL, or builtin:oracle for the in-process Bayes oracle"},
      {"model", ParamKind::kString, def.model_name, "model name sent with each request"},
      {"api_key_env", ParamKind::kString, def.api_key_env, "environment variable holding the API key"},
      {"timeout_seconds", ParamKind::kDouble, def.timeout_seconds, "per-request timeout", 0},
      {"max_retries", ParamKind::kInt, def.max_retries, "retries on transport errors, 429 and 5xx", 0},
      {"backoff_seconds", ParamKind::kDouble, def.backoff_initial_seconds, "first retry delay (doubles each retry)", 0},
      {"temperature", ParamKind::kDouble, def.temperature, "sampling temperature", 0},
      {"max_tokens", ParamKind::kInt, def.max_tokens, "completion token cap", 1},
      {"max_in_flight", ParamKind::kInt, def.max_in_flight, "concurrent requests", 1},
      {"template", ParamKind::kString, std::string(llm_probe::kDefaultTemplate), "prompt template with {examples} and {query}"},
      bootstrap_param(),
  });
  e.run = [](const RunContext& ctx) {
    using namespace boolean_detail;
    const auto cs = cells(ctx.params);
    const auto policy = policy_from(get_string(ctx.params, "triple_policy"));
    const std::string tmpl = get_string(ctx.params, "template");
    try {
      llm_probe::validate_template(tmpl);
    } catch (const llm_probe::TemplateError& err) {
      throw ConfigError("params.template", err.what());
    }
    llm_probe::ProbeConfig cfg;
    cfg.endpoint_url = get_string(ctx.params, "endpoint_url");
    cfg.model_name = get_string(ctx.params, "model");
    cfg.api_key_env = get_string(ctx.params, "api_key_env");
    cfg.timeout_seconds = get_double(ctx.params, "timeout_seconds");
    cfg.max_retries = get_size(ctx.params, "max_retries");
    cfg.backoff_initial_seconds = get_double(ctx.params, "backoff_seconds");
    cfg.temperature = get_double(ctx.params, "temperature");
    cfg.max_tokens = static_cast<int>(get_int(ctx.params, "max_tokens"));
    cfg.max_in_flight = get_size(ctx.params, "max_in_flight");

    std::vector<llm_probe::ProbePrompt> prompts;
    for (std::size_t sec = 0; sec < cs.size(); ++sec) {
      const PromptCell& c = cs[sec];
      const std::string id = "d" + std::to_string(c.d) + "-n" + std::to_string(c.n) + "-" + boolean::to_string(c.mode);
      auto made = map_trials(ctx, sec, id, ctx.trials, [&](Rng& rng, std::size_t j) {
        return llm_probe::ProbePrompt{id + "-" + std::to_string(j), boolean::gen_prompt(rng, c.d, c.n, c.mode, policy)};
      });
      prompts.insert(prompts.end(), std::make_move_iterator(made.begin()), std::make_move_iterator(made.end()));
    }

    const llm_probe::CompletionFn complete =
        cfg.endpoint_url == kBuiltinOracleEndpoint
            ? llm_probe::CompletionFn([](const std::string& text) { return llm_probe::Completion{llm_probe::oracle_completion(text), 0}; })
            : llm_probe::http_completion(cfg);
    std::vector<llm_probe::ProbeResult> results;
    try {
      results = llm_probe::run_probe(prompts, complete, tmpl, cfg.max_in_flight);
    } catch (const TaskError& err) {
      const std::string what = err.what();
      throw TrialError("prompt " + prompts[err.index()].id, err.index(), what.substr(what.find(": ") + 2));
    }

    Table table("results", {text_col("prompt_id"), int_col("d"), int_col("n_examples"), text_col("mode"),
                            text_col("triple"), text_col("query"), int_col("simple_label"), int_col("complex_label"),
                            text_col("raw_completion"), int_col("parsed_label"), int_col("agree_simple"),
                            int_col("agree_complex"), int_col("retries")});
    auto tri = [](const std::optional<bool>& b) -> std::int64_t { return b ? std::int64_t{*b} : -1; };
    for (std::size_t i = 0; i < prompts.size(); ++i) {
      const auto& p = prompts[i].prompt;
      const auto& r = results[i];
      table.add_row({r.prompt_id, as_int(p.dim), as_int(p.examples.size()), boolean::to_string(p.mode),
                     triple_text(p.triple), bits_text(p.query), std::int64_t{p.query[0]},
                     std::int64_t{boolean::majority(p.query, p.triple)}, r.raw_completion,
                     r.parsed_label ? std::int64_t{*r.parsed_label} : std::int64_t{-1}, tri(r.agree_simple),
                     tri(r.agree_complex), as_int(r.retries)});
    }

    const auto rows = llm_probe::score_run(prompts, results, ctx.bootstrap_rng(0), get_size(ctx.params, "bootstrap_resamples"));
    std::vector<Column> cols;
    for (const auto& name : llm_probe::score_columns()) {
      cols.push_back(name == "n_examples" || name == "d" ? int_col(name) : name == "mode" ? text_col(name) : real_col(name));
    }
    Table scores("scores", cols);
    for (const auto& r : rows) {
      scores.add_row({as_int(r.n_examples), as_int(r.d), boolean::to_string(r.mode), r.agree_simple.mean,
                      r.agree_simple.lo, r.agree_simple.hi, r.agree_complex.mean, r.agree_complex.lo,
                      r.agree_complex.hi, r.unparseable_rate});
    }
    return std::vector<Table>{std::move(table), std::move(scores)};
  };
  return e;
}

}  // namespace occam::harness

#endif  // OCCAM_HARNESS_BOOLEAN_EXPERIMENTS_HPP_
