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

#ifndef OCCAM_NUMERICS_SPECIAL_HPP_
#define OCCAM_NUMERICS_SPECIAL_HPP_

// Gamma-family special functions on the positive half-line. Evaluation is
// delegated to Boost.Math; this header owns the domain contract.

#include <cmath>
#include <cstddef>
#include <string>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "occam/numerics/errors.hpp"

namespace occam {

namespace special_detail {

inline void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(name) + ": argument must be positive and finite");
  }
}

}  // namespace special_detail

/// ln Γ(x) for x > 0.
inline double log_gamma(double x) {
  special_detail::require_positive(x, "log_gamma");
  return boost::math::lgamma(x);
}

/// ψ(x) = d/dx ln Γ(x) for x > 0.
inline double digamma(double x) {
  special_detail::require_positive(x, "digamma");
  return boost::math::digamma(x);
}

/// ψ₁(x) = d²/dx² ln Γ(x) for x > 0.
inline double trigamma(double x) {
  special_detail::require_positive(x, "trigamma");
  return boost::math::trigamma(x);
}

/// Multivariate digamma ψ_p(a) = Σ_{i=1..p} ψ(a + (1 - i)/2), for a > (p - 1)/2.
inline double multivariate_digamma(std::size_t p, double a) {
  if (p == 0) throw DomainError("multivariate_digamma: dimension must be >= 1");
  if (!std::isfinite(a) || !(a > 0.5 * static_cast<double>(p - 1))) {
    throw DomainError("multivariate_digamma: requires a > (p - 1) / 2");
  }
  double sum = 0.0;
  for (std::size_t i = 1; i <= p; ++i) {
    sum += digamma(a + 0.5 * (1.0 - static_cast<double>(i)));
  }
  return sum;
}

}  // namespace occam

#endif  // OCCAM_NUMERICS_SPECIAL_HPP_
