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


#ifndef OCCAM_HARNESS_PCFG_EXPERIMENTS_HPP_
#define OCCAM_HARNESS_PCFG_EXPERIMENTS_HPP_

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "occam/harness/experiment.hpp"
#include "occam/pcfg.hpp"

namespace occam::harness {

inline Experiment pcfg_experiment() {
  Experiment e;
  e.name = "pcfg";
  e.summary = "boundary next-symbol laws, exhaustive depth-0 grammar posteriors, and family identification";
  e.default_trials = 200;
  e.trials_help = "random-grammar trials per family";
  e.params = {
      {"fixed_grammars", ParamKind::kDoubleMatrix,
       Json::array({{0.1, 0.2, 0.3, 0.4}, {0.25, 0.25, 0.25, 0.25}, {0.4, 0.1, 0.2, 0.3}, {0.5, 0.5, 0, 0}, {0.3, 0.7, 0, 0}}),
       "production probabilities (ab, ba, aa, bb) checked against Monte Carlo; zero repeats make a simple grammar", 0},
      {"mc_blocks", ParamKind::kInt, 100000, "depth-0 blocks sampled per fixed grammar", 1},
      {"max_count", ParamKind::kInt, 12, "enumerate all (n1, n2) with n1 + n2 <= max_count", 0},
      {"lengths", ParamKind::kIntList, Json::array({7, 16, 31, 61, 121}),
       "prefix lengths for the identification trials; each must be 1 mod 3 (ends on an opener)", 4},
      {"prior_simple", ParamKind::kDouble, 0.5, "prior mass on the simple family", 0},
      bootstrap_param(),
  };
  e.run = [](const RunContext& ctx) {
    using namespace pcfg;
    const auto fixed = get_matrix(ctx.params, "fixed_grammars");
    const auto mc_blocks = get_size(ctx.params, "mc_blocks");
    const auto max_count = get_size(ctx.params, "max_count");
    const auto lengths = sorted_unique(get_sizes(ctx.params, "lengths"));
    const double prior_simple = get_double(ctx.params, "prior_simple");
    const auto resamples = get_size(ctx.params, "bootstrap_resamples");
    if (!(prior_simple > 0 && prior_simple < 1)) throw ConfigError("params.prior_simple", "must lie in (0, 1)");
    for (std::size_t t : lengths) {
      if (t % 3 != 1) throw ConfigError("params.lengths", std::to_string(t) + " is not 1 mod 3");
    }
    const Distribution prior({prior_simple, 1.0 - prior_simple});
    const Distribution half = Distribution::uniform(2);

    // Identification trials, one section per family.
    Table trials("trials", {text_col("family"), int_col("trial"), int_col("length"), real_col("post_true_family"),
                            text_col("map_family"), real_col("kl_true_bayes")});
    Table summary("summary", {text_col("family"), int_col("length"), int_col("trials"), real_col("post_true_mean"),
                              real_col("post_true_lo"), real_col("post_true_hi"), real_col("frac_map_correct"),
                              real_col("kl_true_bayes_mean")});
    struct Point {
      double post_true;
      bool map_correct;
      double kl;
    };
    std::uint64_t boot = 0;
    const Family families[2] = {Family::kSimple, Family::kComplex};
    for (std::size_t sec = 0; sec < 2; ++sec) {
      const Family fam = families[sec];
      const auto results = map_trials(ctx, sec, to_string(fam) + " grammars", ctx.trials, [&](Rng& rng, std::size_t) {
        const Pcfg g = sample_grammar(rng, fam);
        const SymbolSequence full = generate_sequence(rng, g, lengths.back(), 0);
        std::vector<Point> pts;
        for (std::size_t t : lengths) {
          const SymbolSequence seq(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(t));
          const PosteriorReport post = grammar_posterior(seq, prior);
          const Symbol opener = seq.back();
          pts.push_back({post.posterior[sec], post.map_index() == sec,
                         kl_divergence(boundary_next_distribution(g, opener), bayes_boundary_predict(seq, prior))});
        }
        return pts;
      });
      for (std::size_t li = 0; li < lengths.size(); ++li) {
        std::vector<double> post, kl;
        std::vector<bool> correct;
        for (std::size_t j = 0; j < results.size(); ++j) {
          const Point& p = results[j][li];
          trials.add_row({to_string(fam), as_int(j), as_int(lengths[li]), p.post_true,
                          to_string(p.map_correct ? fam : families[1 - sec]), p.kl});
          post.push_back(p.post_true);
          kl.push_back(p.kl);
          correct.push_back(p.map_correct);
        }
        const MeanInterval m = bootstrap_mean(post, ctx.bootstrap_rng(boot++), resamples);
        summary.add_row({to_string(fam), as_int(lengths[li]), as_int(results.size()), m.mean, m.lo, m.hi,
                         fraction(correct), mean_of(kl)});
      }
    }

    // Boundary laws against depth-0 Monte Carlo.
    Table boundary("boundary_mc", {int_col("grammar"), real_col("p_ab"), real_col("p_ba"), real_col("p_aa"),
                                   real_col("p_bb"), text_col("family"), text_col("first"), int_col("openers"),
                                   real_col("analytic_next_a"), real_col("mc_next_a"), real_col("abs_error"),
                                   int_col("repeat_count")});
    for (std::size_t gi = 0; gi < fixed.size(); ++gi) {
      const std::string field = "params.fixed_grammars[" + std::to_string(gi) + "]";
      if (fixed[gi].size() != 4) throw ConfigError(field, "expected 4 production probabilities");
      const bool simple = fixed[gi][2] == 0.0 && fixed[gi][3] == 0.0;
      std::optional<Pcfg> g;
      try {
        g.emplace(Distribution(fixed[gi]), half, simple ? Family::kSimple : Family::kComplex);
      } catch (const DomainError& err) {
        throw ConfigError(field, err.what());
      }
      std::array<std::array<std::int64_t, 2>, 2> hits{};
      map_trials(ctx, 2 + gi, "fixed grammar " + std::to_string(gi), 1, [&](Rng& rng, std::size_t) {
        const SymbolSequence seq = generate_sequence(rng, *g, 3 * mc_blocks, 0);
        for (std::size_t i = 0; i + 1 < seq.size(); i += 3) ++hits[static_cast<int>(seq[i])][static_cast<int>(seq[i + 1])];
        return 0;
      });
      for (Symbol first : {Symbol::kA, Symbol::kB}) {
        const auto& row = hits[static_cast<int>(first)];
        const std::int64_t openers = row[0] + row[1];
        double analytic = std::numeric_limits<double>::quiet_NaN();
        try {
          analytic = boundary_next_distribution(*g, first)[0];
        } catch (const DegenerateEvidenceError&) {
        }
        const double mc = openers > 0 ? static_cast<double>(row[0]) / static_cast<double>(openers)
                                      : std::numeric_limits<double>::quiet_NaN();
        boundary.add_row({as_int(gi), fixed[gi][0], fixed[gi][1], fixed[gi][2], fixed[gi][3],
                          to_string(g->family()), std::string(1, to_char(first)), openers, analytic, mc,
                          std::abs(mc - analytic), row[static_cast<int>(first)]});
      }
    }

    // Exhaustive posterior over repeat-free count pairs.
    Table enumeration("enumeration", {int_col("n_ab"), int_col("n_ba"), real_col("log_marginal_simple"),
                                      real_col("log_marginal_complex"), real_col("post_simple")});
    for (std::size_t total = 0; total <= max_count; ++total) {
      for (std::size_t n1 = 0; n1 <= total; ++n1) {
        BlockCounts counts;
        counts.n = {n1, total - n1, 0, 0};
        const double ls = family_log_marginal(counts, Family::kSimple);
        const double lc = family_log_marginal(counts, Family::kComplex);
        const auto post = make_posterior_report({"simple", "complex"}, {ls, lc}, prior);
        enumeration.add_row({as_int(n1), as_int(total - n1), ls, lc, post.posterior[0]});
      }
    }
    return std::vector<Table>{std::move(summary), std::move(trials), std::move(boundary), std::move(enumeration)};
  };
  return e;
}

}  // namespace occam::harness

#endif  // OCCAM_HARNESS_PCFG_EXPERIMENTS_HPP_
