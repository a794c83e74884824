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


#ifndef OCCAM_REGRESSION_HPP_
#define OCCAM_REGRESSION_HPP_

/// @file
/// Noiseless linear regression with two nested task families: weights on
/// the first d/2 coordinates only ("simple") or on all d ("complex").
/// Least-squares benchmarks, Gaussian marginal densities of the labels
/// under w ~ N(0, I), the dimension posterior, and Wishart log-det
/// expectations.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "occam/numerics/distribution.hpp"
#include "occam/numerics/errors.hpp"
#include "occam/numerics/linalg.hpp"
#include "occam/numerics/parallel.hpp"
#include "occam/numerics/rng.hpp"
#include "occam/numerics/special.hpp"

namespace occam::regression {

/// Labels off the column space by more than this relative residual have
/// zero density under the restricted family.
inline constexpr double kSubspaceTolerance = 1e-8;

enum class Category { kSimple, kComplex };
enum class Restriction { kHalf, kFull };

inline std::string to_string(Category c) { return c == Category::kSimple ? "simple" : "complex"; }
inline std::string to_string(Restriction r) { return r == Restriction::kHalf ? "half" : "full"; }

struct RegressionTask {
  std::size_t ambient_dim = 0;
  std::size_t active_dim = 0;
  Vector weights;

  Category category() const { return active_dim == ambient_dim ? Category::kComplex : Category::kSimple; }
};

struct RegressionContext {
  Matrix features;  ///< T × d, rows x_t
  Vector labels;    ///< length T
  Vector query;     ///< length d

  std::size_t length() const { return static_cast<std::size_t>(features.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(features.cols()); }
};

struct DimPosterior {
  double log_density_half = 0;
  double log_density_full = 0;
  Distribution posterior = Distribution::uniform(2);  ///< over {d/2, d}
  Vector w_bayes;
  Vector w_half;  ///< padded A_{d/2}† y
  Vector w_full;  ///< A_d† y
  bool by_membership = false;  ///< T ≥ d: decided by subspace membership
};

namespace detail {

inline void check_even(std::size_t d, const char* where) {
  if (d < 2 || d % 2 != 0) throw DomainError(std::string(where) + ": d must be even and >= 2");
}

inline Vector standard_normal(Rng& rng, std::size_t n) {
  Vector v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = rng.normal();
  return v;
}

inline Matrix restricted_design(const RegressionContext& ctx, Restriction r) {
  if (r == Restriction::kFull) return ctx.features;
  return ctx.features.leftCols(static_cast<Eigen::Index>(ctx.dim() / 2));
}

}  // namespace detail

inline RegressionTask sample_task(Rng& rng, std::size_t d, Category category) {
  detail::check_even(d, "sample_task");
  RegressionTask task;
  task.ambient_dim = d;
  task.active_dim = category == Category::kSimple ? d / 2 : d;
  task.weights = Vector::Zero(static_cast<Eigen::Index>(d));
  task.weights.head(static_cast<Eigen::Index>(task.active_dim)) = detail::standard_normal(rng, task.active_dim);
  return task;
}

/// Draws the category uniformly, then the task.
inline RegressionTask sample_mixed_task(Rng& rng, std::size_t d) {
  return sample_task(rng, d, rng.uniform_int(2) == 0 ? Category::kSimple : Category::kComplex);
}

inline RegressionContext generate_context(Rng& rng, const RegressionTask& task, std::size_t length) {
  if (length < 1) throw DomainError("generate_context: T must be >= 1");
  const auto d = static_cast<Eigen::Index>(task.ambient_dim);
  RegressionContext ctx;
  ctx.features.resize(static_cast<Eigen::Index>(length), d);
  for (Eigen::Index i = 0; i < ctx.features.rows(); ++i)
    for (Eigen::Index j = 0; j < d; ++j) ctx.features(i, j) = rng.normal();
  ctx.labels = ctx.features * task.weights;
  ctx.query = detail::standard_normal(rng, task.ambient_dim);
  return ctx;
}

/// Min-norm least squares on the full design or on the first d/2 columns,
/// zero-padded to length d.
inline Vector ls_solution(const RegressionContext& ctx, Restriction restrict) {
  detail::check_even(ctx.dim(), "ls_solution");
  const Vector w = pinv_apply(detail::restricted_design(ctx, restrict), ctx.labels);
  Vector out = Vector::Zero(static_cast<Eigen::Index>(ctx.dim()));
  out.head(w.size()) = w;
  return out;
}

/// ln density of the labels under w_k ~ N(0, I_k) on the restricted design B.
///
/// T ≤ k:  −(T/2) ln 2π − ½ ln det(B Bᵀ) − ½‖B†y‖²
/// T ≥ k:  −(k/2) ln 2π − ½ ln det(Bᵀ B) − ½‖B†y‖², or −∞ off range(B).
inline double marginal_log_density(const RegressionContext& ctx, Restriction dim) {
  detail::check_even(ctx.dim(), "marginal_log_density");
  const Matrix b = detail::restricted_design(ctx, dim);
  const auto t = static_cast<double>(b.rows());
  const auto k = static_cast<double>(b.cols());
  const double ln2pi = std::log(2.0 * std::numbers::pi);
  const double norm2 = pinv_apply(b, ctx.labels).squaredNorm();
  if (b.rows() <= b.cols()) {
    return -0.5 * t * ln2pi - 0.5 * log_det_gram(b, GramMode::kRowGram) - 0.5 * norm2;
  }
  if (projection_residual(b, ctx.labels) > kSubspaceTolerance) return -std::numeric_limits<double>::infinity();
  return -0.5 * k * ln2pi - 0.5 * log_det_gram(b, GramMode::kColumnGram) - 0.5 * norm2;
}

/// Posterior over {d/2, d} under a uniform prior and the matching
/// posterior-weighted regressor.
///
/// For T < d the two densities are compared directly. For T ≥ d both
/// families pin w down, so the simple family wins exactly when y lies in
/// range(A_{d/2}).
inline DimPosterior dim_posterior(const RegressionContext& ctx) {
  detail::check_even(ctx.dim(), "dim_posterior");
  DimPosterior out;
  out.w_half = ls_solution(ctx, Restriction::kHalf);
  out.w_full = ls_solution(ctx, Restriction::kFull);
  out.log_density_half = marginal_log_density(ctx, Restriction::kHalf);
  out.log_density_full = marginal_log_density(ctx, Restriction::kFull);
  if (ctx.length() >= ctx.dim()) {
    out.by_membership = true;
    const bool in_half = std::isfinite(out.log_density_half);
    out.posterior = Distribution::point_mass(2, in_half ? 0 : 1);
  } else {
    const double lh = out.log_density_half;
    const double lf = out.log_density_full;
    const double ls[2] = {lh, lf};
    const double z = log_sum_exp(ls);
    if (!std::isfinite(z)) throw DegenerateEvidenceError("dim_posterior: both densities are zero");
    out.posterior = Distribution({std::exp(lh - z), std::exp(lf - z)});
  }
  out.w_bayes = out.posterior[0] * out.w_half + out.posterior[1] * out.w_full;
  return out;
}

enum class WishartForm {
  kRowGram,         ///< A Aᵀ, A is T × d
  kHalfColumnGram,  ///< A_{d/2}ᵀ A_{d/2}, A_{d/2} is T × d/2
};

/// E ln det of the Gram matrix for standard normal A.
inline double expected_log_det(WishartForm form, std::size_t d, std::size_t length) {
  const auto dd = static_cast<double>(d);
  const auto t = static_cast<double>(length);
  if (form == WishartForm::kRowGram) {
    if (length < 1 || length > d) throw DomainError("expected_log_det: row Gram needs 1 <= T <= d");
    return multivariate_digamma(length, dd / 2.0) + t * std::numbers::ln2;
  }
  detail::check_even(d, "expected_log_det");
  if (length < d / 2) throw DomainError("expected_log_det: half Gram needs T >= d/2");
  return multivariate_digamma(d / 2, t / 2.0) + (dd / 2.0) * std::numbers::ln2;
}

/// Context length used by the log-det gap for ratio c; requires d/2 < T < d.
inline std::size_t gap_length(std::size_t d, double c) {
  detail::check_even(d, "gap_length");
  if (!(c > 0.5 && c < 1.0)) throw DomainError("gap_length: c must lie in (1/2, 1)");
  const auto t = static_cast<std::size_t>(std::llround(c * static_cast<double>(d)));
  if (!(2 * t > d && t < d)) throw DomainError("gap_length: no integer T with d/2 < T < d for d=" + std::to_string(d));
  return t;
}

/// One draw of ln det(A Aᵀ) − ln det(A_{d/2}ᵀ A_{d/2}) for A ~ N(0,1)^{T×d}.
inline double sample_log_det_gap(Rng& rng, std::size_t d, std::size_t length) {
  Matrix a(static_cast<Eigen::Index>(length), static_cast<Eigen::Index>(d));
  for (auto& x : a.reshaped()) x = rng.normal();
  return log_det_gram(a, GramMode::kRowGram) -
         log_det_gram(a.leftCols(static_cast<Eigen::Index>(d / 2)), GramMode::kColumnGram);
}

struct GapRow {
  std::size_t d = 0;
  std::size_t length = 0;
  double mean = 0;
  double stddev = 0;
  double std_error = 0;
  double analytic = 0;

  double normalized() const {
    const auto dd = static_cast<double>(d);
    return mean / (dd * std::log(dd));
  }
};

/// Sampled Δ_d statistics per d; trial j of the i-th d uses stream (i << 32) | j.
inline std::vector<GapRow> log_det_gap_experiment(const Rng& rng, const std::vector<std::size_t>& d_list,
                                                  double c, std::size_t trials, std::size_t threads = 1) {
  if (trials == 0) throw DomainError("log_det_gap_experiment: trials must be > 0");
  std::vector<GapRow> rows;
  for (std::size_t i = 0; i < d_list.size(); ++i) {
    GapRow row;
    row.d = d_list[i];
    row.length = gap_length(row.d, c);
    row.analytic = expected_log_det(WishartForm::kRowGram, row.d, row.length) -
                   expected_log_det(WishartForm::kHalfColumnGram, row.d, row.length);
    const auto draws = parallel_map(trials, threads, [&](std::size_t j) {
      Rng local = rng.fork((static_cast<std::uint64_t>(i) << 32) | j);
      return sample_log_det_gap(local, row.d, row.length);
    });
    double sum = 0;
    for (double x : draws) sum += x;
    row.mean = sum / static_cast<double>(trials);
    double ss = 0;
    for (double x : draws) ss += (x - row.mean) * (x - row.mean);
    row.stddev = trials > 1 ? std::sqrt(ss / static_cast<double>(trials - 1)) : 0.0;
    row.std_error = row.stddev / std::sqrt(static_cast<double>(trials));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace occam::regression

#endif  // OCCAM_REGRESSION_HPP_
