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


#ifndef OCCAM_HARNESS_REGRESSION_EXPERIMENTS_HPP_
#define OCCAM_HARNESS_REGRESSION_EXPERIMENTS_HPP_

#include <cmath>
#include <string>
#include <vector>

#include "occam/harness/experiment.hpp"
#include "occam/regression.hpp"

namespace occam::harness {

namespace regression_detail {

using regression::Category;
using regression::RegressionContext;

inline constexpr Category kCategories[2] = {Category::kSimple, Category::kComplex};

inline std::size_t read_even_dim(const Json& p) {
  const auto d = get_size(p, "d");
  if (d < 2 || d % 2 != 0) throw ConfigError("params.d", "must be even and >= 2");
  return d;
}

inline RegressionContext prefix(const RegressionContext& ctx, std::size_t length) {
  const auto t = static_cast<Eigen::Index>(length);
  return {ctx.features.topRows(t), ctx.labels.head(t), ctx.query};
}

inline double sq_error(const Vector& w, const regression::RegressionTask& task, const Vector& query) {
  const double e = w.dot(query) - task.weights.dot(query);
  return e * e;
}

}  // namespace regression_detail

inline Experiment regression_posterior_experiment() {
  Experiment e;
  e.name = "regression-posterior";
  e.summary = "posterior over task dimensionality and the Bayes interpolator on mixed-dimension regression";
  e.default_trials = 500;
  e.trials_help = "simple-task trials";
  e.params = {
      {"d", ParamKind::kInt, 20, "ambient dimension (even)", 2},
      {"length", ParamKind::kInt, 15, "context length T", 1},
      {"complex_trials", ParamKind::kInt, 100, "complex-task trials", 0},
      {"posterior_threshold", ParamKind::kDouble, 0.99, "posterior(d/2) needed on simple tasks", 0},
      {"relative_error_threshold", ParamKind::kDouble, 0.01, "bound on |w_bayes - w_half| / |w_half|", 0},
      bootstrap_param(),
  };
  e.run = [](const RunContext& ctx) {
    using namespace regression_detail;
    const std::size_t d = read_even_dim(ctx.params);
    const auto length = get_size(ctx.params, "length");
    const double post_thr = get_double(ctx.params, "posterior_threshold");
    const double err_thr = get_double(ctx.params, "relative_error_threshold");
    const auto resamples = get_size(ctx.params, "bootstrap_resamples");
    const std::size_t counts[2] = {ctx.trials, get_size(ctx.params, "complex_trials")};

    Table trials("trials", {text_col("category"), int_col("trial"), real_col("post_half"), real_col("post_full"),
                            real_col("log_density_half"), real_col("log_density_full"), int_col("by_membership"),
                            real_col("relative_error_bayes_half"), real_col("norm_half"), real_col("norm_full"),
                            real_col("query_sq_error_bayes")});
    Table summary("summary", {text_col("category"), int_col("d"), int_col("length"), int_col("trials"),
                              real_col("post_half_mean"), real_col("post_half_lo"), real_col("post_half_hi"),
                              real_col("frac_post_half_confident"), real_col("frac_relative_error_small"),
                              real_col("frac_simple_criterion"), real_col("frac_post_full_one"),
                              real_col("query_sq_error_bayes_mean")});
    struct Row {
      regression::DimPosterior post;
      double rel_err;
      double sq_err;
    };
    for (std::size_t sec = 0; sec < 2; ++sec) {
      const Category cat = kCategories[sec];
      const auto rows = map_trials(ctx, sec, regression::to_string(cat) + " tasks", counts[sec], [&](Rng& rng, std::size_t) {
        const auto task = regression::sample_task(rng, d, cat);
        const RegressionContext c = regression::generate_context(rng, task, length);
        Row r{regression::dim_posterior(c), 0, 0};
        const double nh = r.post.w_half.norm();
        r.rel_err = nh > 0 ? (r.post.w_bayes - r.post.w_half).norm() / nh : std::numeric_limits<double>::quiet_NaN();
        r.sq_err = sq_error(r.post.w_bayes, task, c.query);
        return r;
      });
      std::vector<double> post_half, sq;
      std::vector<bool> confident, small, both, full_one;
      for (std::size_t j = 0; j < rows.size(); ++j) {
        const Row& r = rows[j];
        const double ph = r.post.posterior[0], pf = r.post.posterior[1];
        trials.add_row({regression::to_string(cat), as_int(j), ph, pf, r.post.log_density_half, r.post.log_density_full,
                        std::int64_t{r.post.by_membership}, r.rel_err, r.post.w_half.norm(), r.post.w_full.norm(),
                        r.sq_err});
        post_half.push_back(ph);
        sq.push_back(r.sq_err);
        confident.push_back(ph > post_thr);
        small.push_back(r.rel_err < err_thr);
        both.push_back(ph > post_thr && r.rel_err < err_thr);
        full_one.push_back(pf == 1.0);
      }
      const MeanInterval m = bootstrap_mean(post_half, ctx.bootstrap_rng(sec), resamples);
      summary.add_row({regression::to_string(cat), as_int(d), as_int(length), as_int(rows.size()), m.mean, m.lo, m.hi,
                       fraction(confident), fraction(small), fraction(both), fraction(full_one), mean_of(sq)});
    }
    return std::vector<Table>{std::move(trials), std::move(summary)};
  };
  return e;
}

inline Experiment regression_ctx_sweep_experiment() {
  Experiment e;
  e.name = "regression-ctx-sweep";
  e.summary = "dimensionality posterior and query error of Bayes / least-squares predictors versus context length";
  e.default_trials = 100;
  e.trials_help = "trials per task category (each evaluated on every prefix length)";
  Json lengths = Json::array();
  for (int t = 1; t <= 39; ++t) lengths.push_back(t);
  e.params = {
      {"d", ParamKind::kInt, 20, "ambient dimension (even)", 2},
      {"lengths", ParamKind::kIntList, lengths, "prefix lengths evaluated in every trial", 1},
      bootstrap_param(),
  };
  e.run = [](const RunContext& ctx) {
    using namespace regression_detail;
    const std::size_t d = read_even_dim(ctx.params);
    const auto lengths = sorted_unique(get_sizes(ctx.params, "lengths"));
    if (lengths.empty()) throw ConfigError("params.lengths", "needs at least one length");
    const auto resamples = get_size(ctx.params, "bootstrap_resamples");

    Table trials("trials", {text_col("category"), int_col("trial"), int_col("length"), real_col("post_true"),
                            real_col("sq_error_bayes"), real_col("sq_error_half"), real_col("sq_error_full")});
    Table summary("summary", {text_col("category"), int_col("length"), int_col("trials"), real_col("post_true_mean"),
                              real_col("post_true_lo"), real_col("post_true_hi"), real_col("mse_bayes"),
                              real_col("mse_half"), real_col("mse_full")});
    struct Point {
      double post_true, bayes, half, full;
    };
    std::uint64_t boot = 0;
    for (std::size_t sec = 0; sec < 2; ++sec) {
      const Category cat = kCategories[sec];
      const auto results = map_trials(ctx, sec, regression::to_string(cat) + " tasks", ctx.trials, [&](Rng& rng, std::size_t) {
        const auto task = regression::sample_task(rng, d, cat);
        const RegressionContext full = regression::generate_context(rng, task, lengths.back());
        std::vector<Point> pts;
        for (std::size_t t : lengths) {
          const auto post = regression::dim_posterior(prefix(full, t));
          pts.push_back({post.posterior[sec], sq_error(post.w_bayes, task, full.query),
                         sq_error(post.w_half, task, full.query), sq_error(post.w_full, task, full.query)});
        }
        return pts;
      });
      for (std::size_t li = 0; li < lengths.size(); ++li) {
        std::vector<double> post, b, h, f;
        for (std::size_t j = 0; j < results.size(); ++j) {
          const Point& p = results[j][li];
          trials.add_row({regression::to_string(cat), as_int(j), as_int(lengths[li]), p.post_true, p.bayes, p.half, p.full});
          post.push_back(p.post_true);
          b.push_back(p.bayes);
          h.push_back(p.half);
          f.push_back(p.full);
        }
        const MeanInterval m = bootstrap_mean(post, ctx.bootstrap_rng(boot++), resamples);
        summary.add_row({regression::to_string(cat), as_int(lengths[li]), as_int(results.size()), m.mean, m.lo, m.hi,
                         mean_of(b), mean_of(h), mean_of(f)});
      }
    }
    return std::vector<Table>{std::move(trials), std::move(summary)};
  };
  return e;
}

inline Experiment wishart_gap_experiment() {
  Experiment e;
  e.name = "wishart-gap";
  e.summary = "Monte Carlo check of Wishart log-determinant expectations and the Theta(d log d) gap";
  e.default_trials = 2000;
  e.trials_help = "Monte Carlo samples per identity check";
  e.params = {
      {"identity_pairs", ParamKind::kDoubleMatrix, Json::array({{10, 8}, {20, 15}, {40, 30}}),
       "(d, T) pairs for the expectation checks; each T must satisfy d/2 <= T <= d", 1},
      {"gap_dims", ParamKind::kIntList, Json::array({16, 32, 64, 128}), "even dimensions for the gap", 2},
      {"c", ParamKind::kDouble, 0.75, "context ratio T/d for the gap, in (1/2, 1)", 0},
      {"gap_trials", ParamKind::kInt, 200, "samples per gap dimension", 1},
  };
  e.run = [](const RunContext& ctx) {
    using regression::WishartForm;
    const auto pairs = get_matrix(ctx.params, "identity_pairs");
    const auto dims = get_sizes(ctx.params, "gap_dims");
    const double c = get_double(ctx.params, "c");
    const auto gap_trials = get_size(ctx.params, "gap_trials");
    if (!(c > 0.5 && c < 1.0)) throw ConfigError("params.c", "must lie in (1/2, 1)");
    if (ctx.trials < 2) throw ConfigError("trials", "needs at least 2 samples");

    Table samples("identity_samples", {int_col("d"), int_col("length"), text_col("form"), int_col("sample"), real_col("log_det")});
    Table identities("identities", {int_col("d"), int_col("length"), text_col("form"), int_col("samples"),
                                    real_col("mc_mean"), real_col("mc_std_error"), real_col("analytic"), real_col("z_score")});
    std::uint64_t sec = 0;
    for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
      const std::string field = "params.identity_pairs[" + std::to_string(pi) + "]";
      if (pairs[pi].size() != 2) throw ConfigError(field, "expected [d, T]");
      const auto d = static_cast<std::size_t>(pairs[pi][0]);
      const auto t = static_cast<std::size_t>(pairs[pi][1]);
      if (static_cast<double>(d) != pairs[pi][0] || static_cast<double>(t) != pairs[pi][1]) {
        throw ConfigError(field, "d and T must be integers");
      }
      if (d < 2 || d % 2 != 0 || 2 * t < d || t > d) throw ConfigError(field, "needs even d and d/2 <= T <= d");
      for (WishartForm form : {WishartForm::kRowGram, WishartForm::kHalfColumnGram}) {
        const std::string name = form == WishartForm::kRowGram ? "row_gram" : "half_column_gram";
        const auto draws = map_trials(ctx, sec++, name + " d=" + std::to_string(d), ctx.trials, [&](Rng& rng, std::size_t) {
          Matrix a(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(d));
          for (auto& x : a.reshaped()) x = rng.normal();
          return form == WishartForm::kRowGram ? log_det_gram(a, GramMode::kRowGram)
                                               : log_det_gram(a.leftCols(static_cast<Eigen::Index>(d / 2)), GramMode::kColumnGram);
        });
        double sum = 0, ss = 0;
        for (std::size_t j = 0; j < draws.size(); ++j) {
          samples.add_row({as_int(d), as_int(t), name, as_int(j), draws[j]});
          sum += draws[j];
        }
        const double mean = sum / static_cast<double>(draws.size());
        for (double x : draws) ss += (x - mean) * (x - mean);
        const double se = std::sqrt(ss / static_cast<double>(draws.size() - 1) / static_cast<double>(draws.size()));
        const double analytic = regression::expected_log_det(form, d, t);
        identities.add_row({as_int(d), as_int(t), name, as_int(draws.size()), mean, se, analytic, (mean - analytic) / se});
      }
    }

    Table gap_samples("gap_samples", {int_col("d"), int_col("length"), int_col("sample"), real_col("gap")});
    Table gap("gap", {int_col("d"), int_col("length"), int_col("samples"), real_col("mean"), real_col("stddev"),
                      real_col("std_error"), real_col("analytic"), real_col("normalized"), real_col("analytic_normalized")});
    for (std::size_t i = 0; i < dims.size(); ++i) {
      const std::size_t d = dims[i];
      std::size_t t = 0;
      try {
        t = regression::gap_length(d, c);
      } catch (const DomainError& err) {
        throw ConfigError("params.gap_dims[" + std::to_string(i) + "]", err.what());
      }
      const auto draws = map_trials(ctx, sec++, "gap d=" + std::to_string(d), gap_trials,
                                    [&](Rng& rng, std::size_t) { return regression::sample_log_det_gap(rng, d, t); });
      regression::GapRow row;
      row.d = d;
      row.length = t;
      row.analytic = regression::expected_log_det(WishartForm::kRowGram, d, t) -
                     regression::expected_log_det(WishartForm::kHalfColumnGram, d, t);
      double sum = 0, ss = 0;
      for (std::size_t j = 0; j < draws.size(); ++j) {
        gap_samples.add_row({as_int(d), as_int(t), as_int(j), draws[j]});
        sum += draws[j];
      }
      row.mean = sum / static_cast<double>(draws.size());
      for (double x : draws) ss += (x - row.mean) * (x - row.mean);
      row.stddev = draws.size() > 1 ? std::sqrt(ss / static_cast<double>(draws.size() - 1)) : 0.0;
      row.std_error = row.stddev / std::sqrt(static_cast<double>(draws.size()));
      const double scale = static_cast<double>(d) * std::log(static_cast<double>(d));
      gap.add_row({as_int(d), as_int(t), as_int(draws.size()), row.mean, row.stddev, row.std_error, row.analytic,
                   row.normalized(), row.analytic / scale});
    }
    return std::vector<Table>{std::move(identities), std::move(gap), std::move(samples),
                              std::move(gap_samples)};
  };
  return e;
}

}  // namespace occam::harness

#endif  // OCCAM_HARNESS_REGRESSION_EXPERIMENTS_HPP_
