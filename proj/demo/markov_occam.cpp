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


// Watches the order posterior of a single order-1 chain sharpen as the
// context grows, and prints the Bayes next-symbol law next to the raw
// bigram estimate.

#include <cstdio>
#include <vector>

#include "occam/markov.hpp"

int main() {
  using namespace occam;
  using namespace occam::markov;
  Rng rng(2026);
  const MarkovProcess chain = sample_chain(rng, 1, 3);
  const TokenSequence seq = generate_sequence(rng, chain, 1000);
  const std::vector<std::size_t> orders = {1, 2, 3};
  const Distribution prior = Distribution::uniform(orders.size());

  std::printf("%6s %10s %10s %10s   %s\n", "T", "p(s=1)", "p(s=2)", "p(s=3)", "bayes next vs raw bigram");
  for (std::size_t t : {10, 25, 50, 100, 200, 400, 1000}) {
    const TokenSequence prefix = seq.prefix(t);
    const PosteriorReport post = order_posterior(prefix, orders, prior, EvidenceMethod::kExact);
    const Distribution bayes = mixture_predict(prefix, orders, post.posterior);
    std::printf("%6zu %10.4f %10.4f %10.4f   [%.3f %.3f %.3f]", t, post.posterior[0], post.posterior[1],
                post.posterior[2], bayes[0], bayes[1], bayes[2]);
    try {
      const Distribution raw = predict_ngram(prefix, 1, Smoothing::kRaw);
      std::printf(" vs [%.3f %.3f %.3f]\n", raw[0], raw[1], raw[2]);
    } catch (const UnseenContextError&) {
      std::printf(" vs (context unseen)\n");
    }
  }
  return 0;
}
