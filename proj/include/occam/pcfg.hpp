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


#ifndef OCCAM_PCFG_HPP_
#define OCCAM_PCFG_HPP_

/// @file
/// Two-letter PCFG family
///
///   S → ABC | BAC | AAC | BBC   (p₁..p₄)
///   A → a,  B → b
///   C → S | eos                 (q₁, q₂)
///
/// with a "simple" subfamily where p₃ = p₄ = 0. Depth-capped generation,
/// boundary next-letter laws, and family posteriors on depth-0 streams.
/// Tokens serialize as a=0, b=1, eos=2.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "occam/numerics/distribution.hpp"
#include "occam/numerics/errors.hpp"
#include "occam/numerics/posterior.hpp"
#include "occam/numerics/rng.hpp"
#include "occam/numerics/special.hpp"

namespace occam::pcfg {

enum class Symbol : std::uint8_t { kA = 0, kB = 1, kEos = 2 };
enum class Family { kSimple, kComplex };

using SymbolSequence = std::vector<Symbol>;

inline std::string to_string(Family f) { return f == Family::kSimple ? "simple" : "complex"; }

inline char to_char(Symbol s) {
  switch (s) {
    case Symbol::kA: return 'a';
    case Symbol::kB: return 'b';
    default: return '$';
  }
}

/// "ab$ba$" style rendering, '$' for eos.
inline std::string to_string(const SymbolSequence& seq) {
  std::string out;
  out.reserve(seq.size());
  for (Symbol s : seq) out.push_back(to_char(s));
  return out;
}

inline SymbolSequence from_string(const std::string& text) {
  SymbolSequence out;
  for (char c : text) {
    if (c == 'a') out.push_back(Symbol::kA);
    else if (c == 'b') out.push_back(Symbol::kB);
    else if (c == '$') out.push_back(Symbol::kEos);
    else if (c != ' ') throw ParseError(std::string("pcfg: unexpected character '") + c + "'");
  }
  return out;
}

/// Letters emitted by S-production k (0-based: ab, ba, aa, bb).
inline constexpr std::array<std::array<Symbol, 2>, 4> kProductions = {{
    {Symbol::kA, Symbol::kB},
    {Symbol::kB, Symbol::kA},
    {Symbol::kA, Symbol::kA},
    {Symbol::kB, Symbol::kB},
}};

class Pcfg {
 public:
  Pcfg(Distribution p, Distribution q, Family family) : p_(std::move(p)), q_(std::move(q)), family_(family) {
    if (p_.size() != 4) throw DomainError("Pcfg: p must have 4 entries");
    if (q_.size() != 2) throw DomainError("Pcfg: q must have 2 entries");
    if (family_ == Family::kSimple && (p_[2] != 0.0 || p_[3] != 0.0)) {
      throw DomainError("Pcfg: simple grammars need p3 = p4 = 0");
    }
  }

  const Distribution& p() const noexcept { return p_; }
  const Distribution& q() const noexcept { return q_; }
  Family family() const noexcept { return family_; }

 private:
  Distribution p_;
  Distribution q_;
  Family family_;
};

/// p ~ Dir(1,1,1,1) (complex) or (p₁,p₂) ~ Dir(1,1), p₃=p₄=0 (simple); q ~ Dir(1,1).
inline Pcfg sample_grammar(Rng& rng, Family family) {
  Distribution p = Distribution::uniform(4);
  if (family == Family::kComplex) {
    p = sample_symmetric_dirichlet(rng, 4, 1.0);
  } else {
    const Distribution half = sample_symmetric_dirichlet(rng, 2, 1.0);
    p = Distribution({half[0], half[1], 0.0, 0.0});
  }
  Distribution q = sample_symmetric_dirichlet(rng, 2, 1.0);
  return Pcfg(std::move(p), std::move(q), family);
}

/// One string from S. Depth starts at 0 and grows on each C → S; at depth
/// ≥ d_max, C is forced to eos.
inline void derive_string(Rng& rng, const Pcfg& g, std::size_t d_max, SymbolSequence& out) {
  for (std::size_t depth = 0;; ++depth) {
    const auto& letters = kProductions[g.p().sample(rng)];
    out.push_back(letters[0]);
    out.push_back(letters[1]);
    if (depth >= d_max || g.q().sample(rng) == 1) {
      out.push_back(Symbol::kEos);
      return;
    }
  }
}

/// Concatenated strings, truncated to exactly `length` symbols.
inline SymbolSequence generate_sequence(Rng& rng, const Pcfg& g, std::size_t length, std::size_t d_max) {
  if (length < 3) throw DomainError("pcfg::generate_sequence: T must be >= 3");
  SymbolSequence out;
  out.reserve(length + 3);
  while (out.size() < length) derive_string(rng, g, d_max, out);
  out.resize(length);
  return out;
}

/// Law of the second letter of a depth-0 block given its first; index 0 = a, 1 = b.
inline Distribution boundary_next_distribution(const Pcfg& g, Symbol first) {
  const auto& p = g.p();
  double to_a = 0, to_b = 0;
  if (first == Symbol::kA) {
    to_b = p[0];
    to_a = p[2];
  } else if (first == Symbol::kB) {
    to_a = p[1];
    to_b = p[3];
  } else {
    throw DomainError("boundary_next_distribution: opener must be a letter");
  }
  if (to_a + to_b == 0.0) throw DegenerateEvidenceError("boundary_next_distribution: opener has zero probability");
  return Distribution::from_weights({to_a, to_b});
}

/// Depth-0 block statistics: completed block-type counts and a possible
/// trailing opener whose block is unfinished.
struct BlockCounts {
  std::array<std::uint64_t, 4> n{};
  std::optional<Symbol> open_letter;

  std::uint64_t total() const { return n[0] + n[1] + n[2] + n[3]; }
};

inline std::size_t production_index(Symbol first, Symbol second) {
  for (std::size_t k = 0; k < 4; ++k) {
    if (kProductions[k][0] == first && kProductions[k][1] == second) return k;
  }
  throw ParseError("pcfg: block does not start with two letters");
}

/// Splits a depth-0 stream into 'xy eos' blocks. A trailing two-letter
/// fragment counts as its block; a trailing single letter is kept open.
inline BlockCounts count_blocks(const SymbolSequence& seq) {
  BlockCounts counts;
  std::size_t i = 0;
  for (; i + 3 <= seq.size(); i += 3) {
    if (seq[i + 2] != Symbol::kEos) {
      throw ParseError("pcfg: block at position " + std::to_string(i) + " is not closed by eos");
    }
    ++counts.n[production_index(seq[i], seq[i + 1])];
  }
  const std::size_t rest = seq.size() - i;
  if (rest == 2) {
    ++counts.n[production_index(seq[i], seq[i + 1])];
  } else if (rest == 1) {
    if (seq[i] == Symbol::kEos) throw ParseError("pcfg: dangling eos");
    counts.open_letter = seq[i];
  }
  return counts;
}

namespace detail {

/// ln of the ordered-sequence Dirichlet(1)-multinomial probability.
template <std::size_t K>
double dm_log_prob(const std::array<std::uint64_t, K>& n) {
  double total = 0;
  double lp = log_gamma(static_cast<double>(K));
  for (auto c : n) {
    total += static_cast<double>(c);
    lp += log_gamma(1.0 + static_cast<double>(c));
  }
  return lp - log_gamma(static_cast<double>(K) + total);
}

/// Block types consistent with an opener: {ab, aa} for a, {ba, bb} for b.
inline std::array<std::size_t, 2> opener_types(Symbol first) {
  return first == Symbol::kA ? std::array<std::size_t, 2>{0, 2} : std::array<std::size_t, 2>{1, 3};
}

inline double log_add(double a, double b) {
  const double xs[2] = {a, b};
  return log_sum_exp(xs);
}

}  // namespace detail

/// Log evidence of the counts under a family, with a Dir(1) prior on p.
/// An open trailing letter is marginalized over the block types it could start.
inline double family_log_marginal(const BlockCounts& counts, Family family) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (family == Family::kSimple) {
    if (counts.n[2] + counts.n[3] > 0) return kNegInf;
    std::array<std::uint64_t, 2> n = {counts.n[0], counts.n[1]};
    if (counts.open_letter) ++n[*counts.open_letter == Symbol::kA ? 0 : 1];
    return detail::dm_log_prob(n);
  }
  if (!counts.open_letter) return detail::dm_log_prob(counts.n);
  double acc = kNegInf;
  for (std::size_t k : detail::opener_types(*counts.open_letter)) {
    auto n = counts.n;
    ++n[k];
    acc = detail::log_add(acc, detail::dm_log_prob(n));
  }
  return acc;
}

/// Posterior over {simple, complex} for a depth-0 stream.
inline PosteriorReport grammar_posterior(const SymbolSequence& seq, const Distribution& prior) {
  if (prior.size() != 2) throw DomainError("grammar_posterior: prior must cover {simple, complex}");
  const BlockCounts counts = count_blocks(seq);
  return make_posterior_report({"simple", "complex"},
                               {family_log_marginal(counts, Family::kSimple), family_log_marginal(counts, Family::kComplex)},
                               prior);
}

/// Posterior-predictive law of the letter after a trailing opener, mixing
/// both families by their posterior; index 0 = a, 1 = b.
inline Distribution bayes_boundary_predict(const SymbolSequence& seq, const Distribution& prior) {
  const BlockCounts counts = count_blocks(seq);
  if (!counts.open_letter) throw DomainError("bayes_boundary_predict: sequence must end with an opener");
  const PosteriorReport post = grammar_posterior(seq, prior);
  const Symbol first = *counts.open_letter;
  const auto types = detail::opener_types(first);
  // complex: P(type k | counts) ∝ n_k + 1 among the two consistent types
  const double w_cross = static_cast<double>(counts.n[types[0]]) + 1.0;
  const double w_same = static_cast<double>(counts.n[types[1]]) + 1.0;
  const double same_complex = w_same / (w_cross + w_same);
  const double same = post.posterior[1] * same_complex;
  return first == Symbol::kA ? Distribution::from_weights({same, 1.0 - same})
                             : Distribution::from_weights({1.0 - same, same});
}

}  // namespace occam::pcfg

#endif  // OCCAM_PCFG_HPP_
