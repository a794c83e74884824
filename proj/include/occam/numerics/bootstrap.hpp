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


#ifndef OCCAM_NUMERICS_BOOTSTRAP_HPP_
#define OCCAM_NUMERICS_BOOTSTRAP_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "occam/numerics/errors.hpp"
#include "occam/numerics/rng.hpp"

namespace occam {

inline constexpr std::size_t kDefaultBootstrapResamples = 100;

struct MeanInterval {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double lo = std::numeric_limits<double>::quiet_NaN();
  double hi = std::numeric_limits<double>::quiet_NaN();
  std::size_t count = 0;
};

/// Linear-interpolation quantile of sorted data, q in [0, 1].
inline double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw DomainError("quantile_sorted: empty input");
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("quantile_sorted: q outside [0, 1]");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline double mean_of(std::span<const double> xs) {
  if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

/// Sample mean with a percentile bootstrap interval. Empty input gives NaNs.
inline MeanInterval bootstrap_mean(std::span<const double> xs, Rng rng,
                                   std::size_t resamples = kDefaultBootstrapResamples, double level = 0.95) {
  if (resamples == 0) throw DomainError("bootstrap_mean: resamples must be > 0");
  if (!(level > 0.0 && level < 1.0)) throw DomainError("bootstrap_mean: level must lie in (0, 1)");
  MeanInterval out;
  out.count = xs.size();
  if (xs.empty()) return out;
  out.mean = mean_of(xs);
  std::vector<double> means(resamples);
  for (auto& m : means) {
    double s = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) s += xs[rng.uniform_int(xs.size())];
    m = s / static_cast<double>(xs.size());
  }
  std::sort(means.begin(), means.end());
  out.lo = quantile_sorted(means, (1.0 - level) / 2.0);
  out.hi = quantile_sorted(means, 1.0 - (1.0 - level) / 2.0);
  return out;
}

}  // namespace occam

#endif  // OCCAM_NUMERICS_BOOTSTRAP_HPP_
