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


#ifndef OCCAM_ATTENTION_HPP_
#define OCCAM_ATTENTION_HPP_

/// @file
/// Two-layer, attention-only transformer with relative positional terms,
/// and the explicit weight setting under which its last position reads
/// out every bigram conditional p(u | v) of the context.
///
/// Row-vector convention throughout: token t has embedding row z_t, and
///
///   A_ij = (z_i W_Q + r_{i-j+1}) W_K z_jᵀ / √d,   j ≤ i,
///
/// with r_k the k-th row of `rel_pos` (1-based; missing rows are zero).
/// Each layer adds its input back: Z ← Z + softmax(mask(A)) Z W_V.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "occam/markov.hpp"
#include "occam/numerics/errors.hpp"
#include "occam/numerics/linalg.hpp"
#include "occam/numerics/rng.hpp"

namespace occam::attention {

using markov::Token;

struct AttentionHead {
  Matrix w_q;
  Matrix w_k;
  Matrix w_v;
  Matrix rel_pos;  ///< rows r_1, r_2, ...; may be empty
  /// Keys before this 0-based position are masked out (self is kept when
  /// nothing else remains).
  std::size_t first_key = 0;
};

struct AttentionStack {
  std::size_t vocab_size = 0;
  std::size_t embed_dim = 0;
  Matrix embedding;                   ///< V × d
  AttentionHead layer1;
  std::vector<AttentionHead> layer2;  ///< one per head, concatenated
  Matrix w_o;                         ///< out × (d · heads)
  double saturation = 0;              ///< c, 0 for hand-made stacks
};

struct ForwardTrace {
  Matrix layer1_attention;               ///< T × T
  Matrix after_layer1;                   ///< T × d
  std::vector<Matrix> layer2_attention;  ///< per head, T × T
  Matrix heads;                          ///< T × (d · heads)
  Matrix output;                         ///< T × out
};

namespace detail {

inline Matrix embed(const AttentionStack& stack, std::span<const Token> tokens) {
  Matrix z(static_cast<Eigen::Index>(tokens.size()), static_cast<Eigen::Index>(stack.embed_dim));
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    if (tokens[t] >= stack.vocab_size) {
      throw DomainError("attention_forward: token " + std::to_string(tokens[t]) + " out of range");
    }
    z.row(static_cast<Eigen::Index>(t)) = stack.embedding.row(tokens[t]);
  }
  return z;
}

/// Causal softmax attention map for one head.
inline Matrix attention_map(const AttentionHead& head, const Matrix& z) {
  const Eigen::Index n = z.rows();
  const double scale = 1.0 / std::sqrt(static_cast<double>(z.cols()));
  const Matrix q = z * head.w_q;
  const Matrix k = z * head.w_k.transpose();
  Matrix s = Matrix::Zero(n, n);
  std::vector<double> row;
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index lo = std::min<Eigen::Index>(static_cast<Eigen::Index>(head.first_key), i);
    row.assign(static_cast<std::size_t>(i - lo + 1), 0.0);
    double peak = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = lo; j <= i; ++j) {
      double a = q.row(i).dot(k.row(j));
      const Eigen::Index offset = i - j;  // r_{i-j+1} is row offset
      if (offset < head.rel_pos.rows()) a += head.rel_pos.row(offset).dot(k.row(j));
      a *= scale;
      row[static_cast<std::size_t>(j - lo)] = a;
      peak = std::max(peak, a);
    }
    double total = 0;
    for (double& a : row) total += (a = std::exp(a - peak));
    for (Eigen::Index j = lo; j <= i; ++j) s(i, j) = row[static_cast<std::size_t>(j - lo)] / total;
  }
  return s;
}

inline void check_head(const AttentionHead& h, std::size_t d, const char* which) {
  const auto dd = static_cast<Eigen::Index>(d);
  auto square = [&](const Matrix& m) { return m.rows() == dd && m.cols() == dd; };
  if (!square(h.w_q) || !square(h.w_k) || !square(h.w_v) || (h.rel_pos.size() > 0 && h.rel_pos.cols() != dd)) {
    throw DomainError(std::string("attention: bad weight shape in ") + which);
  }
}

}  // namespace detail

inline ForwardTrace attention_forward_trace(const AttentionStack& stack, std::span<const Token> tokens) {
  const std::size_t d = stack.embed_dim;
  if (stack.embedding.rows() != static_cast<Eigen::Index>(stack.vocab_size) ||
      stack.embedding.cols() != static_cast<Eigen::Index>(d)) {
    throw DomainError("attention: embedding must be V x d");
  }
  detail::check_head(stack.layer1, d, "layer 1");
  for (const auto& h : stack.layer2) detail::check_head(h, d, "layer 2");
  if (stack.w_o.cols() != static_cast<Eigen::Index>(d * stack.layer2.size())) {
    throw DomainError("attention: W_O must have d * heads columns");
  }
  if (tokens.empty()) throw DomainError("attention_forward: empty sequence");

  ForwardTrace trace;
  const Matrix z = detail::embed(stack, tokens);
  trace.layer1_attention = detail::attention_map(stack.layer1, z);
  trace.after_layer1 = z + trace.layer1_attention * z * stack.layer1.w_v;

  const auto n = static_cast<Eigen::Index>(tokens.size());
  const auto dd = static_cast<Eigen::Index>(d);
  trace.heads.resize(n, dd * static_cast<Eigen::Index>(stack.layer2.size()));
  for (std::size_t h = 0; h < stack.layer2.size(); ++h) {
    const AttentionHead& head = stack.layer2[h];
    Matrix s = detail::attention_map(head, trace.after_layer1);
    trace.heads.middleCols(static_cast<Eigen::Index>(h) * dd, dd) =
        trace.after_layer1 + s * trace.after_layer1 * head.w_v;
    trace.layer2_attention.push_back(std::move(s));
  }
  trace.output = trace.heads * stack.w_o.transpose();
  return trace;
}

/// Per-position outputs, T × out; the last row is the prediction.
inline Matrix attention_forward(const AttentionStack& stack, std::span<const Token> tokens) {
  return attention_forward_trace(stack, tokens).output;
}

inline Matrix attention_forward(const AttentionStack& stack, const markov::TokenSequence& seq) {
  return attention_forward(stack, seq.tokens());
}

struct ExtractorOptions {
  /// Mask key position 1 in layer 2; it has no predecessor and would
  /// otherwise be read as a self-transition x₁ → x₁.
  bool exclude_first_key = true;
};

/// The bigram-reading stack with d = 3V and saturation c (post-scaling).
///
/// Layer 1: E = [I, I, 0], W_Q = 0, r_2 = 1, W_K[1,1] = c√d·I, W_V[2,2] = I.
/// Head v:  W_Q[2,2] = 1·e_vᵀ, W_K[2,1] = −κ e_v e_vᵀ, W_K[2,2] = κ e_v e_vᵀ
///          with κ = c√d/2, W_V[1,3] = I.
/// W_O = diag(P, ..., P) with P = [0 0 I].
inline AttentionStack build_bigram_extractor(std::size_t vocab_size, double c, ExtractorOptions options = {}) {
  if (vocab_size < 2) throw DomainError("build_bigram_extractor: V must be >= 2");
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("build_bigram_extractor: c must be positive");
  const auto v = static_cast<Eigen::Index>(vocab_size);
  const Eigen::Index d = 3 * v;
  const double root_d = std::sqrt(static_cast<double>(d));
  const Matrix id = Matrix::Identity(v, v);

  AttentionStack s;
  s.vocab_size = vocab_size;
  s.embed_dim = static_cast<std::size_t>(d);
  s.saturation = c;
  s.embedding = Matrix::Zero(v, d);
  s.embedding.block(0, 0, v, v) = id;
  s.embedding.block(0, v, v, v) = id;

  s.layer1.w_q = Matrix::Zero(d, d);
  s.layer1.w_k = Matrix::Zero(d, d);
  s.layer1.w_k.block(0, 0, v, v) = c * root_d * id;
  s.layer1.w_v = Matrix::Zero(d, d);
  s.layer1.w_v.block(v, v, v, v) = id;
  s.layer1.rel_pos = Matrix::Zero(2, d);
  s.layer1.rel_pos.row(1).setOnes();

  const double kappa = c * root_d / 2.0;
  for (Eigen::Index u = 0; u < v; ++u) {
    AttentionHead h;
    h.w_q = Matrix::Zero(d, d);
    h.w_q.block(v, v, v, v).col(u).setOnes();
    h.w_k = Matrix::Zero(d, d);
    h.w_k(v + u, u) = -kappa;
    h.w_k(v + u, v + u) = kappa;
    h.w_v = Matrix::Zero(d, d);
    h.w_v.block(0, 2 * v, v, v) = id;
    h.first_key = options.exclude_first_key ? 1 : 0;
    s.layer2.push_back(std::move(h));
  }

  s.w_o = Matrix::Zero(v * v, d * v);
  for (Eigen::Index u = 0; u < v; ++u) s.w_o.block(u * v, u * d + 2 * v, v, v) = id;
  return s;
}

struct ConditionalTable {
  Matrix probs;                ///< V × V, entry (v, u) = p(u | v)
  std::vector<bool> observed;  ///< row v has at least one transition
};

/// Raw bigram conditionals from counts; unobserved rows are zero.
inline ConditionalTable empirical_conditionals(const markov::TokenSequence& seq) {
  const std::size_t v = seq.vocab_size();
  ConditionalTable t{Matrix::Zero(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(v)),
                     std::vector<bool>(v, false)};
  const markov::NGramStats stats = markov::ngram_counts(seq, 1);
  for (const auto& [ctx, row] : stats.successor_counts) {
    const double n = static_cast<double>(stats.context_count(ctx));
    if (n == 0) continue;
    t.observed[ctx] = true;
    for (std::size_t u = 0; u < v; ++u) {
      t.probs(static_cast<Eigen::Index>(ctx), static_cast<Eigen::Index>(u)) = static_cast<double>(row[u]) / n;
    }
  }
  return t;
}

struct VerifyReport {
  double max_abs_error = 0;
  ConditionalTable table;     ///< read from the network
  ConditionalTable expected;  ///< from counts
  std::vector<std::size_t> excluded_rows;
  double residual_magnitude = 0;  ///< |W_O-projected z'_T|, zero by construction
  double min_entry = 0;
  double max_entry = 0;
  std::size_t length = 0;
};

/// Runs the stack on `seq` and compares the last-position readout with the
/// count-based conditionals over rows v that occur as a predecessor.
inline VerifyReport verify_on(const AttentionStack& stack, const markov::TokenSequence& seq) {
  if (seq.size() < 3) throw DomainError("verify_construction: T must be >= 3");
  if (seq.vocab_size() != stack.vocab_size) throw DomainError("verify_construction: vocabulary mismatch");
  const auto v = static_cast<Eigen::Index>(stack.vocab_size);
  const auto d = static_cast<Eigen::Index>(stack.embed_dim);
  const ForwardTrace trace = attention_forward_trace(stack, seq.tokens());
  const Eigen::Index last = trace.output.rows() - 1;

  // Residual path: each head carries z'_T; project it through W_O.
  Matrix residual(1, d * static_cast<Eigen::Index>(stack.layer2.size()));
  for (Eigen::Index h = 0; h < static_cast<Eigen::Index>(stack.layer2.size()); ++h) {
    residual.middleCols(h * d, d) = trace.after_layer1.row(last);
  }
  const Matrix residual_out = residual * stack.w_o.transpose();

  VerifyReport r;
  r.length = seq.size();
  r.residual_magnitude = residual_out.cwiseAbs().maxCoeff();
  r.expected = empirical_conditionals(seq);
  r.table = ConditionalTable{Matrix::Zero(v, v), r.expected.observed};
  r.min_entry = std::numeric_limits<double>::infinity();
  r.max_entry = -std::numeric_limits<double>::infinity();
  for (Eigen::Index row = 0; row < v; ++row) {
    for (Eigen::Index u = 0; u < v; ++u) {
      r.table.probs(row, u) = trace.output(last, row * v + u) - residual_out(0, row * v + u);
    }
    if (!r.expected.observed[static_cast<std::size_t>(row)]) {
      r.excluded_rows.push_back(static_cast<std::size_t>(row));
      continue;
    }
    for (Eigen::Index u = 0; u < v; ++u) {
      const double got = r.table.probs(row, u);
      r.max_abs_error = std::max(r.max_abs_error, std::abs(got - r.expected.probs(row, u)));
      r.min_entry = std::min(r.min_entry, got);
      r.max_entry = std::max(r.max_entry, got);
    }
  }
  return r;
}

/// Draws an order-1 chain and a length-T sequence from it, then verifies
/// build_bigram_extractor(V, c) on that sequence.
inline VerifyReport verify_construction(Rng& rng, std::size_t vocab_size, std::size_t length, double c,
                                        ExtractorOptions options = {}) {
  if (length < 3) throw DomainError("verify_construction: T must be >= 3");
  const markov::MarkovProcess chain = markov::sample_chain(rng, 1, vocab_size);
  const markov::TokenSequence seq = markov::generate_sequence(rng, chain, length);
  return verify_on(build_bigram_extractor(vocab_size, c, options), seq);
}

}  // namespace occam::attention

#endif  // OCCAM_ATTENTION_HPP_
