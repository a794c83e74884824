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

#ifndef OCCAM_MARKOV_HPP_
#define OCCAM_MARKOV_HPP_

/// @file
/// Fixed-order Markov chains over a finite vocabulary: sampling, n-gram
/// statistics, Dirichlet-multinomial evidence (exact and BIC), posteriors
/// over the chain order, and the posterior-mixture next-token predictor.
///
/// Conventions shared by every function here:
///  - A length-s context (x_{t-s}, ..., x_{t-1}) is encoded base V with
///    x_{t-s} as the most significant digit.
///  - The first s symbols of a sequence are uniform on [V]; both evidence
///    forms charge them s·ln(1/V) so orders stay comparable.
///  - Evidence is carried in log space (nats).

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "occam/numerics/distribution.hpp"
#include "occam/numerics/errors.hpp"
#include "occam/numerics/posterior.hpp"
#include "occam/numerics/rng.hpp"
#include "occam/numerics/special.hpp"

namespace occam::markov {

using Token = std::uint32_t;

/// V^s, rejecting tables that cannot be indexed by 64-bit contexts.
inline std::uint64_t num_contexts(std::size_t vocab_size, std::size_t order) {
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < order; ++i) {
    if (n > std::numeric_limits<std::uint64_t>::max() / vocab_size) {
      throw DomainError("markov: V^s overflows the context index");
    }
    n *= vocab_size;
  }
  return n;
}

/// Symbols over [0, V).
class TokenSequence {
 public:
  TokenSequence(std::vector<Token> tokens, std::size_t vocab_size)
      : tokens_(std::move(tokens)), vocab_size_(vocab_size) {
    if (vocab_size_ < 1) throw DomainError("TokenSequence: empty vocabulary");
    for (Token t : tokens_) {
      if (t >= vocab_size_) throw DomainError("TokenSequence: token out of range");
    }
  }

  std::size_t size() const noexcept { return tokens_.size(); }
  std::size_t vocab_size() const noexcept { return vocab_size_; }
  Token operator[](std::size_t i) const { return tokens_[i]; }
  std::span<const Token> tokens() const noexcept { return tokens_; }

  TokenSequence prefix(std::size_t length) const {
    if (length > tokens_.size()) throw DomainError("TokenSequence::prefix: too long");
    return TokenSequence(std::vector<Token>(tokens_.begin(), tokens_.begin() + length),
                         vocab_size_);
  }

  friend bool operator==(const TokenSequence&, const TokenSequence&) = default;

 private:
  std::vector<Token> tokens_;
  std::size_t vocab_size_;
};

/// Encodes window[0..s) base V, most significant first.
inline std::uint64_t encode_context(std::span<const Token> window, std::size_t vocab_size) {
  std::uint64_t ctx = 0;
  for (Token t : window) ctx = ctx * vocab_size + t;
  return ctx;
}

/// Order-s chain: V^s rows, each a distribution over the next symbol.
class MarkovProcess {
 public:
  MarkovProcess(std::size_t order, std::size_t vocab_size, std::vector<Distribution> rows)
      : order_(order), vocab_size_(vocab_size), rows_(std::move(rows)) {
    if (order_ < 1) throw DomainError("MarkovProcess: order must be >= 1");
    if (vocab_size_ < 2) throw DomainError("MarkovProcess: vocabulary must have >= 2 symbols");
    if (rows_.size() != num_contexts(vocab_size_, order_)) {
      throw DomainError("MarkovProcess: expected V^s rows");
    }
    for (const auto& row : rows_) {
      if (row.size() != vocab_size_) throw DomainError("MarkovProcess: row width != V");
    }
  }

  std::size_t order() const noexcept { return order_; }
  std::size_t vocab_size() const noexcept { return vocab_size_; }
  std::size_t num_rows() const noexcept { return rows_.size(); }
  const Distribution& row(std::uint64_t context) const { return rows_.at(context); }
  std::span<const Distribution> rows() const noexcept { return rows_; }

 private:
  std::size_t order_;
  std::size_t vocab_size_;
  std::vector<Distribution> rows_;
};

/// Sliding-window counts of every length-(s+1) window.
struct NGramStats {
  std::size_t order = 0;
  std::size_t vocab_size = 0;
  std::map<std::uint64_t, std::uint64_t> context_counts;
  std::map<std::uint64_t, std::vector<std::uint64_t>> successor_counts;

  std::uint64_t context_count(std::uint64_t ctx) const {
    const auto it = context_counts.find(ctx);
    return it == context_counts.end() ? 0 : it->second;
  }

  std::uint64_t transition_count(std::uint64_t ctx, Token next) const {
    const auto it = successor_counts.find(ctx);
    return it == successor_counts.end() ? 0 : it->second.at(next);
  }

  std::uint64_t total_windows() const {
    std::uint64_t n = 0;
    for (const auto& [ctx, c] : context_counts) n += c;
    return n;
  }
};

namespace detail {

// Counts windows without the |seq| > s requirement; fewer symbols yield
// empty statistics.
inline NGramStats count_windows(const TokenSequence& seq, std::size_t order) {
  const std::size_t v = seq.vocab_size();
  num_contexts(v, order);  // overflow check
  NGramStats stats{order, v, {}, {}};
  const auto tokens = seq.tokens();
  for (std::size_t t = order; t < tokens.size(); ++t) {
    const std::uint64_t ctx = encode_context(tokens.subspan(t - order, order), v);
    ++stats.context_counts[ctx];
    auto [it, inserted] = stats.successor_counts.try_emplace(ctx);
    if (inserted) it->second.assign(v, 0);
    ++it->second[tokens[t]];
  }
  return stats;
}

inline double prefix_log_prob(std::size_t order, std::size_t vocab_size) {
  return -static_cast<double>(order) * std::log(static_cast<double>(vocab_size));
}

}  // namespace detail

/// Order-s window counts; requires |seq| > s.
inline NGramStats ngram_counts(const TokenSequence& seq, std::size_t order) {
  if (seq.size() <= order) {
    throw DomainError("ngram_counts: sequence must be longer than the order");
  }
  return detail::count_windows(seq, order);
}

enum class Smoothing {
  kRaw,     ///< count(ctx → v) / count(ctx)
  kAddOne,  ///< (count(ctx → v) + 1) / (count(ctx) + V): posterior mean under Dir(1)
};

enum class EvidenceMethod { kExact, kBic };

inline const char* to_string(EvidenceMethod m) {
  return m == EvidenceMethod::kExact ? "exact" : "bic";
}

/// Next-symbol law given the last s symbols, from in-sequence counts.
inline Distribution predict_ngram(const TokenSequence& seq, std::size_t order,
                                  Smoothing smoothing) {
  if (seq.size() < order) throw DomainError("predict_ngram: sequence shorter than order");
  const std::size_t v = seq.vocab_size();
  const NGramStats stats = detail::count_windows(seq, order);
  const std::uint64_t ctx =
      encode_context(seq.tokens().subspan(seq.size() - order, order), v);
  const double total = static_cast<double>(stats.context_count(ctx));
  std::vector<double> probs(v);
  if (smoothing == Smoothing::kRaw) {
    if (total == 0.0) {
      throw UnseenContextError("predict_ngram: last context has no observed successor");
    }
    for (Token u = 0; u < v; ++u) {
      probs[u] = static_cast<double>(stats.transition_count(ctx, u)) / total;
    }
  } else {
    const double denom = total + static_cast<double>(v);
    for (Token u = 0; u < v; ++u) {
      probs[u] = (static_cast<double>(stats.transition_count(ctx, u)) + 1.0) / denom;
    }
  }
  return Distribution(std::move(probs));
}

/// ln p(X | s) under independent Dir(1) rows and a uniform prefix.
///
///   s·ln(1/V) + Σ_ctx [ln Γ(V) − ln Γ(V + n_ctx) + Σ_v ln Γ(1 + n_ctx,v)]
inline double log_marginal_exact(const TokenSequence& seq, std::size_t order) {
  if (seq.size() < order) throw DomainError("log_marginal_exact: sequence shorter than order");
  const std::size_t v = seq.vocab_size();
  const double vd = static_cast<double>(v);
  const NGramStats stats = detail::count_windows(seq, order);
  double lm = detail::prefix_log_prob(order, v);
  const double lg_v = log_gamma(vd);
  for (const auto& [ctx, counts] : stats.successor_counts) {
    const double n_ctx = static_cast<double>(stats.context_count(ctx));
    lm += lg_v - log_gamma(vd + n_ctx);
    for (std::uint64_t c : counts) {
      if (c > 0) lm += log_gamma(1.0 + static_cast<double>(c));
    }
  }
  return lm;
}

/// The three additive pieces of the BIC evidence approximation.
struct BicTerms {
  double prefix = 0.0;     ///< s·ln(1/V)
  double empirical = 0.0;  ///< Σ_{t>s} ln p̂(x_t | x_{t-s..t-1})
  double penalty = 0.0;    ///< V^s (V−1)/2 · ln T

  double total() const noexcept { return prefix + empirical - penalty; }
};

/// Maximized log-likelihood with the raw in-sequence conditionals, minus
/// half the free-parameter count times ln T. The empirical sum starts at
/// t = s+1, where the order-s conditional is first defined.
inline BicTerms bic_terms(const TokenSequence& seq, std::size_t order) {
  if (seq.size() <= order) throw DomainError("log_marginal_bic: requires T > s");
  const std::size_t v = seq.vocab_size();
  const NGramStats stats = detail::count_windows(seq, order);
  BicTerms terms;
  terms.prefix = detail::prefix_log_prob(order, v);
  for (const auto& [ctx, counts] : stats.successor_counts) {
    const double n_ctx = static_cast<double>(stats.context_count(ctx));
    for (std::uint64_t c : counts) {
      if (c > 0) {
        const double cd = static_cast<double>(c);
        terms.empirical += cd * std::log(cd / n_ctx);
      }
    }
  }
  const double params = static_cast<double>(num_contexts(v, order)) * (static_cast<double>(v) - 1.0);
  terms.penalty = 0.5 * params * std::log(static_cast<double>(seq.size()));
  return terms;
}

inline double log_marginal_bic(const TokenSequence& seq, std::size_t order) {
  return bic_terms(seq, order).total();
}

inline double log_marginal(const TokenSequence& seq, std::size_t order, EvidenceMethod method) {
  return method == EvidenceMethod::kExact ? log_marginal_exact(seq, order)
                                          : log_marginal_bic(seq, order);
}

/// p(s | X) ∝ p(X | s) π(s) over the candidate orders.
inline PosteriorReport order_posterior(const TokenSequence& seq,
                                       std::span<const std::size_t> orders,
                                       const Distribution& prior, EvidenceMethod method) {
  if (orders.empty()) throw DomainError("order_posterior: no candidate orders");
  if (prior.size() != orders.size()) throw DomainError("order_posterior: prior size != #orders");
  std::vector<std::string> labels;
  std::vector<double> evidence;
  for (std::size_t s : orders) {
    labels.push_back("s=" + std::to_string(s));
    evidence.push_back(log_marginal(seq, s, method));
  }
  return make_posterior_report(std::move(labels), std::move(evidence), prior);
}

/// Σ_s weights_s · add-one order-s prediction.
inline Distribution mixture_predict(const TokenSequence& seq,
                                    std::span<const std::size_t> orders,
                                    const Distribution& weights) {
  if (weights.size() != orders.size()) throw DomainError("mixture_predict: weight size != #orders");
  std::vector<double> mix(seq.vocab_size(), 0.0);
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (weights[i] == 0.0) continue;
    const Distribution component = predict_ngram(seq, orders[i], Smoothing::kAddOne);
    for (std::size_t u = 0; u < mix.size(); ++u) mix[u] += weights[i] * component[u];
  }
  return Distribution::from_weights(std::move(mix));
}

/// Bayes-optimal next-symbol law under the mixture over orders.
inline Distribution bayes_predict(const TokenSequence& seq, std::span<const std::size_t> orders,
                                  const Distribution& prior, EvidenceMethod method) {
  const PosteriorReport post = order_posterior(seq, orders, prior, method);
  return mixture_predict(seq, orders, post.posterior);
}

/// V^s rows drawn independently from the symmetric Dir(alpha·1_V).
inline MarkovProcess sample_chain(Rng& rng, std::size_t order, std::size_t vocab_size,
                                  double alpha = 1.0) {
  if (order < 1) throw DomainError("sample_chain: order must be >= 1");
  if (vocab_size < 2) throw DomainError("sample_chain: vocabulary must have >= 2 symbols");
  if (!(alpha > 0.0)) throw DomainError("sample_chain: alpha must be positive");
  const std::uint64_t n_rows = num_contexts(vocab_size, order);
  std::vector<Distribution> rows;
  rows.reserve(n_rows);
  for (std::uint64_t r = 0; r < n_rows; ++r) {
    rows.push_back(sample_symmetric_dirichlet(rng, vocab_size, alpha));
  }
  return MarkovProcess(order, vocab_size, std::move(rows));
}

/// Re-expresses a chain at a higher order; rows ignore the extra history.
inline MarkovProcess lift_order(const MarkovProcess& chain, std::size_t new_order) {
  if (new_order < chain.order()) throw DomainError("lift_order: cannot lower the order");
  const std::size_t v = chain.vocab_size();
  const std::uint64_t n_rows = num_contexts(v, new_order);
  const std::uint64_t modulus = num_contexts(v, chain.order());
  std::vector<Distribution> rows;
  rows.reserve(n_rows);
  // The most recent s symbols are the least significant digits.
  for (std::uint64_t ctx = 0; ctx < n_rows; ++ctx) rows.push_back(chain.row(ctx % modulus));
  return MarkovProcess(new_order, v, std::move(rows));
}

/// Continues `prefix` (which must hold at least s symbols) to length T.
inline TokenSequence continue_sequence(Rng& rng, const MarkovProcess& chain, std::size_t length,
                                       std::vector<Token> tokens) {
  const std::size_t s = chain.order();
  if (tokens.size() < s) throw DomainError("generate_sequence: prefix shorter than order");
  if (length < tokens.size()) throw DomainError("generate_sequence: prefix longer than T");
  tokens.reserve(length);
  std::uint64_t ctx = encode_context(std::span<const Token>(tokens).last(s), chain.vocab_size());
  const std::uint64_t modulus = chain.num_rows();
  while (tokens.size() < length) {
    const auto next = static_cast<Token>(chain.row(ctx).sample(rng));
    tokens.push_back(next);
    ctx = (ctx * chain.vocab_size() + next) % modulus;
  }
  return TokenSequence(std::move(tokens), chain.vocab_size());
}

/// T symbols: an i.i.d. uniform prefix of length s, then chain transitions.
inline TokenSequence generate_sequence(Rng& rng, const MarkovProcess& chain, std::size_t length) {
  if (length < chain.order()) throw DomainError("generate_sequence: T < s");
  std::vector<Token> prefix(chain.order());
  for (auto& t : prefix) t = static_cast<Token>(rng.uniform_int(chain.vocab_size()));
  return continue_sequence(rng, chain, length, std::move(prefix));
}

}  // namespace occam::markov

#endif  // OCCAM_MARKOV_HPP_
