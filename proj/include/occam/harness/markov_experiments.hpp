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


#ifndef OCCAM_HARNESS_MARKOV_EXPERIMENTS_HPP_
#define OCCAM_HARNESS_MARKOV_EXPERIMENTS_HPP_

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "occam/harness/experiment.hpp"
#include "occam/markov.hpp"

namespace occam::harness {

namespace markov_detail {

using markov::EvidenceMethod;
using markov::TokenSequence;

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Setup {
  std::size_t vocab;
  std::vector<std::size_t> orders;
  std::vector<std::size_t> true_orders;
  double alpha;
};

inline Setup read_setup(const Json& p) {
  Setup s{get_size(p, "vocab_size"), get_sizes(p, "orders"), get_sizes(p, "true_orders"), get_double(p, "alpha")};
  if (s.orders.empty()) throw ConfigError("params.orders", "needs at least one order");
  if (s.true_orders.empty()) throw ConfigError("params.true_orders", "needs at least one order");
  for (std::size_t t : s.true_orders) {
    if (std::find(s.orders.begin(), s.orders.end(), t) == s.orders.end()) {
      throw ConfigError("params.true_orders", "order " + std::to_string(t) + " is not a candidate in params.orders");
    }
  }
  if (!(s.alpha > 0)) throw ConfigError("params.alpha", "must be positive");
  return s;
}

inline std::size_t index_of(const std::vector<std::size_t>& xs, std::size_t x) {
  return static_cast<std::size_t>(std::find(xs.begin(), xs.end(), x) - xs.begin());
}

inline std::size_t max_of(const std::vector<std::size_t>& xs) { return *std::max_element(xs.begin(), xs.end()); }

inline EvidenceMethod method_from(const std::string& s) {
  return s == "bic" ? EvidenceMethod::kBic : EvidenceMethod::kExact;
}

/// Row of the generating chain at the sequence's final context.
inline Distribution true_next(const markov::MarkovProcess& chain, const TokenSequence& seq) {
  const std::size_t s = chain.order();
  return chain.row(markov::encode_context(seq.tokens().last(s), seq.vocab_size()));
}

inline std::vector<ParamSpec> common_specs() {
  return {
      {"vocab_size", ParamKind::kInt, 3, "alphabet size V", 2},
      {"orders", ParamKind::kIntList, Json::array({1, 3}), "candidate chain orders (uniform prior)", 1},
      {"true_orders", ParamKind::kIntList, Json::array({1, 3}), "generating orders, one section each", 1},
      {"alpha", ParamKind::kDouble, 1.0, "Dirichlet concentration of the transition rows", 0},
  };
}

struct PosteriorTrial {
  std::vector<double> exact;
  std::vector<double> bic;
  std::uint64_t visits = 0;
  double kl_raw = kNaN;
  double kl_add_one = kNaN;
  double kl_true = kNaN;
};

}  // namespace markov_detail

inline Experiment markov_posterior_experiment() {
  Experiment e;
  e.name = "markov-posterior";
  e.summary = "order posterior (exact and BIC evidence) and Bayes-predictor collapse on Markov chains";
  e.default_trials = 200;
  e.trials_help = "trials per generating order";
  e.params = markov_detail::common_specs();
  e.params.push_back({"lengths", ParamKind::kIntList, Json::array({300, 1000}),
                      "sequence length per generating order (one value applies to all)", 2});
  e.params.push_back({"confidence", ParamKind::kDouble, 0.95, "posterior mass that counts as confident", 0});
  e.params.push_back({"min_visits", ParamKind::kInt, 20, "final-context visits needed for the KL columns", 1});
  e.params.push_back(bootstrap_param());
  e.run = [](const RunContext& ctx) {
    using namespace markov_detail;
    const Setup s = read_setup(ctx.params);
    const auto lengths = get_sizes(ctx.params, "lengths");
    if (lengths.size() != 1 && lengths.size() != s.true_orders.size()) {
      throw ConfigError("params.lengths", "needs one value or one per true order");
    }
    const double confidence = get_double(ctx.params, "confidence");
    const auto min_visits = get_size(ctx.params, "min_visits");
    const auto resamples = get_size(ctx.params, "bootstrap_resamples");
    const Distribution prior = Distribution::uniform(s.orders.size());

    std::vector<Column> cols = {int_col("true_order"), int_col("trial"), int_col("length")};
    for (std::size_t o : s.orders) cols.push_back(real_col("post_exact_s" + std::to_string(o)));
    for (std::size_t o : s.orders) cols.push_back(real_col("post_bic_s" + std::to_string(o)));
    for (const char* c : {"map_exact", "map_bic", "final_context_visits"}) cols.push_back(int_col(c));
    for (const char* c : {"kl_raw_bayes", "kl_add_one_bayes", "kl_true_bayes"}) cols.push_back(real_col(c));
    Table trials("trials", cols);
    Table summary("summary", {int_col("true_order"), int_col("length"), int_col("trials"),
                              real_col("frac_confident_exact"), real_col("frac_confident_bic"),
                              real_col("post_true_exact_mean"), real_col("post_true_exact_lo"),
                              real_col("post_true_exact_hi"), real_col("map_agreement"), int_col("kl_trials"),
                              real_col("kl_raw_bayes_mean"), real_col("kl_add_one_bayes_mean"),
                              real_col("kl_true_bayes_mean")});

    for (std::size_t sec = 0; sec < s.true_orders.size(); ++sec) {
      const std::size_t order = s.true_orders[sec];
      const std::size_t length = lengths.size() == 1 ? lengths[0] : lengths[sec];
      if (length <= max_of(s.orders)) throw ConfigError("params.lengths", "must exceed every candidate order");
      const std::size_t ti = index_of(s.orders, order);
      const auto results = map_trials(ctx, sec, "true order " + std::to_string(order), ctx.trials, [&](Rng& rng, std::size_t) {
        const markov::MarkovProcess chain = markov::sample_chain(rng, order, s.vocab, s.alpha);
        const TokenSequence seq = markov::generate_sequence(rng, chain, length);
        PosteriorTrial t;
        const auto exact = markov::order_posterior(seq, s.orders, prior, EvidenceMethod::kExact);
        const auto bic = markov::order_posterior(seq, s.orders, prior, EvidenceMethod::kBic);
        t.exact.assign(exact.posterior.probs().begin(), exact.posterior.probs().end());
        t.bic.assign(bic.posterior.probs().begin(), bic.posterior.probs().end());
        const Distribution bayes = markov::mixture_predict(seq, s.orders, exact.posterior);
        const auto stats = markov::ngram_counts(seq, order);
        t.visits = stats.context_count(markov::encode_context(seq.tokens().last(order), s.vocab));
        t.kl_true = kl_divergence(true_next(chain, seq), bayes);
        if (t.visits >= min_visits) {
          t.kl_raw = kl_divergence(markov::predict_ngram(seq, order, markov::Smoothing::kRaw), bayes);
          t.kl_add_one = kl_divergence(markov::predict_ngram(seq, order, markov::Smoothing::kAddOne), bayes);
        }
        return t;
      });

      std::vector<bool> conf_exact, conf_bic, agree;
      std::vector<double> post_true, kl_raw, kl_add, kl_true;
      for (std::size_t j = 0; j < results.size(); ++j) {
        const PosteriorTrial& t = results[j];
        const std::size_t map_e = std::max_element(t.exact.begin(), t.exact.end()) - t.exact.begin();
        const std::size_t map_b = std::max_element(t.bic.begin(), t.bic.end()) - t.bic.begin();
        std::vector<Cell> row = {as_int(order), as_int(j), as_int(length)};
        for (double x : t.exact) row.emplace_back(x);
        for (double x : t.bic) row.emplace_back(x);
        row.insert(row.end(), {as_int(s.orders[map_e]), as_int(s.orders[map_b]), static_cast<std::int64_t>(t.visits),
                               t.kl_raw, t.kl_add_one, t.kl_true});
        trials.add_row(std::move(row));
        conf_exact.push_back(t.exact[ti] > confidence);
        conf_bic.push_back(t.bic[ti] > confidence);
        agree.push_back(map_e == map_b);
        post_true.push_back(t.exact[ti]);
        kl_raw.push_back(t.kl_raw);
        kl_add.push_back(t.kl_add_one);
        kl_true.push_back(t.kl_true);
      }
      const MeanInterval pt = bootstrap_mean(post_true, ctx.bootstrap_rng(sec), resamples);
      const auto raw_ok = finite_only(kl_raw);
      summary.add_row({as_int(order), as_int(length), as_int(results.size()), fraction(conf_exact), fraction(conf_bic),
                       pt.mean, pt.lo, pt.hi, fraction(agree), as_int(raw_ok.size()), mean_of(raw_ok),
                       mean_of(finite_only(kl_add)), mean_of(kl_true)});
    }
    return std::vector<Table>{std::move(trials), std::move(summary)};
  };
  return e;
}

inline Experiment markov_ctx_sweep_experiment() {
  Experiment e;
  e.name = "markov-ctx-sweep";
  e.summary = "posterior on the generating order and Bayes-predictor KL versus context length";
  e.default_trials = 200;
  e.trials_help = "trials per generating order (each evaluated on every prefix length)";
  e.params = markov_detail::common_specs();
  e.params.push_back({"lengths", ParamKind::kIntList, Json::array({50, 100, 200, 400, 800}),
                      "prefix lengths evaluated in every trial", 2});
  e.params.push_back(choice_param("method", "exact", "evidence form", {"exact", "bic"}));
  e.params.push_back({"confidence", ParamKind::kDouble, 0.95, "posterior mass that counts as confident", 0});
  e.params.push_back(bootstrap_param());
  e.run = [](const RunContext& ctx) {
    using namespace markov_detail;
    const Setup s = read_setup(ctx.params);
    const auto lengths = sorted_unique(get_sizes(ctx.params, "lengths"));
    if (lengths.empty()) throw ConfigError("params.lengths", "needs at least one length");
    if (lengths.front() <= max_of(s.orders)) throw ConfigError("params.lengths", "must exceed every candidate order");
    const EvidenceMethod method = method_from(get_string(ctx.params, "method"));
    const double confidence = get_double(ctx.params, "confidence");
    const auto resamples = get_size(ctx.params, "bootstrap_resamples");
    const Distribution prior = Distribution::uniform(s.orders.size());

    Table trials("trials", {int_col("true_order"), int_col("trial"), int_col("length"), real_col("post_true"),
                            int_col("map_order"), real_col("kl_true_bayes")});
    Table summary("summary", {int_col("true_order"), int_col("length"), int_col("trials"), real_col("post_true_mean"),
                              real_col("post_true_lo"), real_col("post_true_hi"), real_col("frac_confident"),
                              real_col("kl_true_bayes_mean")});
    struct Point {
      double post_true;
      std::size_t map_order;
      double kl_true;
    };
    std::uint64_t boot = 0;
    for (std::size_t sec = 0; sec < s.true_orders.size(); ++sec) {
      const std::size_t order = s.true_orders[sec];
      const std::size_t ti = index_of(s.orders, order);
      const auto results = map_trials(ctx, sec, "true order " + std::to_string(order), ctx.trials, [&](Rng& rng, std::size_t) {
        const markov::MarkovProcess chain = markov::sample_chain(rng, order, s.vocab, s.alpha);
        const TokenSequence full = markov::generate_sequence(rng, chain, lengths.back());
        std::vector<Point> pts;
        for (std::size_t len : lengths) {
          const TokenSequence seq = full.prefix(len);
          const auto post = markov::order_posterior(seq, s.orders, prior, method);
          const Distribution bayes = markov::mixture_predict(seq, s.orders, post.posterior);
          pts.push_back({post.posterior[ti], s.orders[post.map_index()], kl_divergence(true_next(chain, seq), bayes)});
        }
        return pts;
      });
      for (std::size_t li = 0; li < lengths.size(); ++li) {
        std::vector<double> post, kl;
        std::vector<bool> conf;
        for (std::size_t j = 0; j < results.size(); ++j) {
          const Point& p = results[j][li];
          trials.add_row({as_int(order), as_int(j), as_int(lengths[li]), p.post_true, as_int(p.map_order), p.kl_true});
          post.push_back(p.post_true);
          kl.push_back(p.kl_true);
          conf.push_back(p.post_true > confidence);
        }
        const MeanInterval m = bootstrap_mean(post, ctx.bootstrap_rng(boot++), resamples);
        summary.add_row({as_int(order), as_int(lengths[li]), as_int(results.size()), m.mean, m.lo, m.hi, fraction(conf),
                         mean_of(kl)});
      }
    }
    return std::vector<Table>{std::move(trials), std::move(summary)};
  };
  return e;
}

}  // namespace occam::harness

#endif  // OCCAM_HARNESS_MARKOV_EXPERIMENTS_HPP_
