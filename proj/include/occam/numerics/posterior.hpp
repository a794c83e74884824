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

#ifndef OCCAM_NUMERICS_POSTERIOR_HPP_
#define OCCAM_NUMERICS_POSTERIOR_HPP_

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "occam/numerics/distribution.hpp"
#include "occam/numerics/errors.hpp"

namespace occam {

/// Evidence and normalized posterior over a finite hypothesis set.
///
/// posterior ∝ exp(log_marginals) · prior, computed in log space.
struct PosteriorReport {
  std::vector<std::string> hypotheses;
  std::vector<double> log_marginals;
  Distribution prior;
  Distribution posterior;

  std::size_t map_index() const noexcept { return posterior.argmax(); }
};

inline PosteriorReport make_posterior_report(std::vector<std::string> hypotheses,
                                             std::vector<double> log_marginals,
                                             Distribution prior) {
  const std::size_t n = hypotheses.size();
  if (n == 0) throw DomainError("posterior: no hypotheses");
  if (log_marginals.size() != n || prior.size() != n) {
    throw DomainError("posterior: hypotheses, evidence and prior sizes differ");
  }
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  std::vector<double> joint(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(log_marginals[i]) || log_marginals[i] == -kNegInf) {
      throw DomainError("posterior: log marginal must be finite or -inf");
    }
    joint[i] = prior[i] > 0.0 ? log_marginals[i] + std::log(prior[i]) : kNegInf;
  }
  const double norm = log_sum_exp(joint);
  if (norm == kNegInf) {
    throw DegenerateEvidenceError("posterior: every hypothesis has zero mass");
  }
  std::vector<double> post(n);
  for (std::size_t i = 0; i < n; ++i) post[i] = std::exp(joint[i] - norm);
  return PosteriorReport{std::move(hypotheses), std::move(log_marginals),
                         std::move(prior), Distribution::from_weights(std::move(post))};
}

}  // namespace occam

#endif  // OCCAM_NUMERICS_POSTERIOR_HPP_
