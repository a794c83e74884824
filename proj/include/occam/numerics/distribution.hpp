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

#ifndef OCCAM_NUMERICS_DISTRIBUTION_HPP_
#define OCCAM_NUMERICS_DISTRIBUTION_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "occam/numerics/errors.hpp"
#include "occam/numerics/rng.hpp"

namespace occam {

inline constexpr double kProbabilitySumTolerance = 1e-12;

/// Probability vector over a finite support {0, ..., size-1}.
class Distribution {
 public:
  /// Validates non-negativity and unit mass (within 1e-12).
  explicit Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw DomainError("Distribution: empty support");
    double total = 0.0;
    for (double p : probs_) {
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw DomainError("Distribution: entries must be finite and >= 0");
      }
      total += p;
    }
    if (std::abs(total - 1.0) > kProbabilitySumTolerance) {
      throw DomainError("Distribution: entries must sum to 1");
    }
  }

  /// Normalizes non-negative weights with a positive total.
  static Distribution from_weights(std::vector<double> weights) {
    double total = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw DomainError("Distribution::from_weights: weights must be finite and >= 0");
      }
      total += w;
    }
    if (!(total > 0.0)) throw DomainError("Distribution::from_weights: zero total mass");
    for (double& w : weights) w /= total;
    return Distribution(std::move(weights));
  }

  static Distribution uniform(std::size_t n) {
    if (n == 0) throw DomainError("Distribution::uniform: empty support");
    return Distribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  static Distribution point_mass(std::size_t n, std::size_t at) {
    if (at >= n) throw DomainError("Distribution::point_mass: index out of range");
    std::vector<double> probs(n, 0.0);
    probs[at] = 1.0;
    return Distribution(std::move(probs));
  }

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const noexcept { return probs_; }

  std::size_t argmax() const noexcept {
    return static_cast<std::size_t>(
        std::max_element(probs_.begin(), probs_.end()) - probs_.begin());
  }

  double sum() const noexcept {
    return std::accumulate(probs_.begin(), probs_.end(), 0.0);
  }

  /// Index drawn by inverse CDF.
  std::size_t sample(Rng& rng) const {
    const double u = rng.uniform();
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
      if (probs_[i] > 0.0) last_positive = i;
      acc += probs_[i];
      if (u < acc) return i;
    }
    return last_positive;  // u landed in the rounding gap above the total
  }

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  std::vector<double> probs_;
};

/// ln Σ exp(x_i), shifted by the maximum. All −∞ inputs give −∞.
inline double log_sum_exp(std::span<const double> xs) {
  if (xs.empty()) throw DomainError("log_sum_exp: empty input");
  const double m = *std::max_element(xs.begin(), xs.end());
  if (std::isnan(m)) throw DomainError("log_sum_exp: NaN input");
  if (m == -std::numeric_limits<double>::infinity()) return m;
  if (m == std::numeric_limits<double>::infinity()) return m;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - m);
  return m + std::log(acc);
}

/// KL(p ‖ q) in nats; +∞ when p puts mass where q has none.
inline double kl_divergence(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size()) throw DomainError("kl_divergence: support size mismatch");
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
    kl += p[i] * std::log(p[i] / q[i]);
  }
  // Rounding can push a zero divergence slightly negative.
  return std::max(kl, 0.0);
}

/// One draw from Dir(alpha), normalized in log space.
inline Distribution sample_dirichlet(Rng& rng, std::span<const double> alpha) {
  if (alpha.empty()) throw DomainError("sample_dirichlet: empty concentration vector");
  std::vector<double> logs(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (!(alpha[i] > 0.0) || !std::isfinite(alpha[i])) {
      throw DomainError("sample_dirichlet: concentrations must be positive");
    }
    logs[i] = rng.log_gamma_variate(alpha[i]);
  }
  const double norm = log_sum_exp(logs);
  for (double& l : logs) l = std::exp(l - norm);
  return Distribution::from_weights(std::move(logs));
}

/// Symmetric Dir(concentration · 1_n).
inline Distribution sample_symmetric_dirichlet(Rng& rng, std::size_t n,
                                               double concentration) {
  const std::vector<double> alpha(n, concentration);
  return sample_dirichlet(rng, alpha);
}

}  // namespace occam

#endif  // OCCAM_NUMERICS_DISTRIBUTION_HPP_
