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


#ifndef OCCAM_BOOLEAN_HPP_
#define OCCAM_BOOLEAN_HPP_

/// @file
/// Copy-a-bit versus majority-of-three prompts, and the exact posterior
/// over all d + C(d,3) deterministic hypotheses given labelled examples.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "occam/numerics/distribution.hpp"
#include "occam/numerics/errors.hpp"
#include "occam/numerics/rng.hpp"

namespace occam::boolean {

using Bits = std::vector<std::uint8_t>;
using Triple = std::array<std::size_t, 3>;

inline constexpr std::size_t kMaxRejections = 100000;
inline constexpr double kTieMargin = 1e-12;

class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InconsistentContextError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { kAmbiguous, kComplex };
enum class TriplePolicy { kInclusive, kExcludeZero };

inline std::string to_string(Mode m) { return m == Mode::kAmbiguous ? "ambiguous" : "complex"; }

struct Example {
  Bits x;
  std::uint8_t y = 0;
};

struct BooleanPrompt {
  std::size_t dim = 0;
  Triple triple{};
  std::vector<Example> examples;
  Bits query;
  Mode mode = Mode::kAmbiguous;
};

inline std::uint8_t majority(const Bits& x, const Triple& t) {
  return static_cast<std::uint8_t>(x[t[0]] + x[t[1]] + x[t[2]] >= 2);
}

inline bool is_unambiguous(const Bits& query, const Triple& t) { return query[0] != majority(query, t); }

/// All sorted index triples of [d] in lexicographic order.
inline std::vector<Triple> all_triples(std::size_t d) {
  std::vector<Triple> out;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      for (std::size_t k = j + 1; k < d; ++k) out.push_back({i, j, k});
  return out;
}

inline Triple sample_triple(Rng& rng, std::size_t d, TriplePolicy policy) {
  std::vector<Triple> pool;
  for (const Triple& t : all_triples(d)) {
    if (policy == TriplePolicy::kExcludeZero && t[0] == 0) continue;
    pool.push_back(t);
  }
  if (pool.empty()) throw InfeasibleError("sample_triple: no admissible triple");
  return pool[rng.uniform_int(pool.size())];
}

namespace detail {

inline Bits random_bits(Rng& rng, std::size_t d) {
  Bits x(d);
  for (auto& b : x) b = static_cast<std::uint8_t>(rng.next_u32() & 1u);
  return x;
}

template <typename Accept>
Bits rejection_draw(Rng& rng, std::size_t d, Accept accept, const char* what) {
  for (std::size_t attempt = 0; attempt < kMaxRejections; ++attempt) {
    Bits x = random_bits(rng, d);
    if (accept(x)) return x;
  }
  throw InfeasibleError(std::string("gen_prompt: rejection limit reached for ") + what);
}

}  // namespace detail

/// Ambiguous: x[0] = Maj on every example (both functions agree).
/// Complex: y = Maj ≠ x[0] on every example. Either way the query
/// separates the two functions.
inline BooleanPrompt gen_prompt(Rng& rng, std::size_t d, std::size_t n_examples, Mode mode,
                                TriplePolicy policy = TriplePolicy::kInclusive) {
  if (d < 5) throw DomainError("gen_prompt: d must be >= 5");
  if (n_examples < 1) throw DomainError("gen_prompt: need at least one example");
  BooleanPrompt p;
  p.dim = d;
  p.mode = mode;
  p.triple = sample_triple(rng, d, policy);
  const Triple t = p.triple;
  for (std::size_t i = 0; i < n_examples; ++i) {
    Bits x = detail::rejection_draw(
        rng, d, [&](const Bits& b) { return mode == Mode::kAmbiguous ? !is_unambiguous(b, t) : is_unambiguous(b, t); },
        "examples");
    const std::uint8_t y = majority(x, t);
    p.examples.push_back({std::move(x), y});
  }
  p.query = detail::rejection_draw(rng, d, [&](const Bits& b) { return is_unambiguous(b, t); }, "query");
  return p;
}

struct HypothesisPosterior {
  std::size_t dim = 0;
  std::vector<double> simple_mass;   ///< copy bit i, length d
  std::vector<Triple> triples;       ///< lexicographic
  std::vector<double> complex_mass;  ///< per triple
  Distribution family_posterior = Distribution::uniform(2);  ///< {simple, complex}

  std::size_t live_simple() const {
    std::size_t n = 0;
    for (double m : simple_mass) n += m > 0;
    return n;
  }
  std::size_t live_complex() const {
    std::size_t n = 0;
    for (double m : complex_mass) n += m > 0;
    return n;
  }
  double mass_of(const Triple& t) const {
    for (std::size_t k = 0; k < triples.size(); ++k)
      if (triples[k] == t) return complex_mass[k];
    return 0.0;
  }
};

/// Prior ½ per family, uniform within each; deterministic likelihoods.
inline HypothesisPosterior hypothesis_posterior(const std::vector<Example>& examples, std::size_t d) {
  if (d < 3) throw DomainError("hypothesis_posterior: d must be >= 3");
  for (const Example& e : examples) {
    if (e.x.size() != d) throw DomainError("hypothesis_posterior: example width != d");
  }
  HypothesisPosterior h;
  h.dim = d;
  h.triples = all_triples(d);
  const double simple_prior = 0.5 / static_cast<double>(d);
  const double complex_prior = 0.5 / static_cast<double>(h.triples.size());
  h.simple_mass.assign(d, 0.0);
  h.complex_mass.assign(h.triples.size(), 0.0);
  double total = 0;
  for (std::size_t i = 0; i < d; ++i) {
    bool ok = true;
    for (const Example& e : examples) ok = ok && e.x[i] == e.y;
    if (ok) total += h.simple_mass[i] = simple_prior;
  }
  for (std::size_t k = 0; k < h.triples.size(); ++k) {
    bool ok = true;
    for (const Example& e : examples) ok = ok && majority(e.x, h.triples[k]) == e.y;
    if (ok) total += h.complex_mass[k] = complex_prior;
  }
  if (!(total > 0)) throw InconsistentContextError("hypothesis_posterior: no hypothesis fits the examples");
  double simple = 0, complex = 0;
  for (double& m : h.simple_mass) simple += (m /= total);
  for (double& m : h.complex_mass) complex += (m /= total);
  h.family_posterior = Distribution::from_weights({simple, complex});
  return h;
}

struct LabelDecision {
  std::uint8_t label = 0;
  double margin = 0;  ///< |P(y=1) − P(y=0)|
  double p_one = 0;
  bool tie_broken = false;
};

/// Posterior-weighted vote at the query. Ties go to the simple family's
/// vote, then to query[0].
inline LabelDecision bayes_label(const HypothesisPosterior& h, const Bits& query) {
  if (query.size() != h.dim) throw DomainError("bayes_label: query width != d");
  double one = 0, zero = 0, simple_one = 0, simple_zero = 0;
  for (std::size_t i = 0; i < h.dim; ++i) {
    (query[i] ? simple_one : simple_zero) += h.simple_mass[i];
  }
  one += simple_one;
  zero += simple_zero;
  for (std::size_t k = 0; k < h.triples.size(); ++k) {
    (majority(query, h.triples[k]) ? one : zero) += h.complex_mass[k];
  }
  LabelDecision out;
  out.p_one = one / (one + zero);
  out.margin = std::abs(one - zero) / (one + zero);
  if (out.margin >= kTieMargin) {
    out.label = one > zero;
    return out;
  }
  out.tie_broken = true;
  if (std::abs(simple_one - simple_zero) >= kTieMargin * (one + zero)) {
    out.label = simple_one > simple_zero;
  } else {
    out.label = query[0];
  }
  return out;
}

}  // namespace occam::boolean

#endif  // OCCAM_BOOLEAN_HPP_
