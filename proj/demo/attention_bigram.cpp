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


// Builds the two-layer attention stack and compares the conditional table it
// reads out with the bigram counts of the same sequence.

#include <cstdio>

#include "occam/attention.hpp"

int main() {
  using namespace occam;
  Rng rng(3);
  const auto chain = markov::sample_chain(rng, 1, 3);
  const auto seq = markov::generate_sequence(rng, chain, 200);
  for (double c : {5.0, 10.0, 20.0, 40.0}) {
    const auto report = attention::verify_on(attention::build_bigram_extractor(3, c), seq);
    std::printf("c = %4.0f  max |network - counts| = %.3e\n", c, report.max_abs_error);
  }
  const auto report = attention::verify_on(attention::build_bigram_extractor(3, 40), seq);
  std::printf("\n%8s %8s %8s %8s\n", "p(u|v)", "u=0", "u=1", "u=2");
  for (int v = 0; v < 3; ++v)
    std::printf("%8s %8.4f %8.4f %8.4f\n", v == 0 ? "v=0" : v == 1 ? "v=1" : "v=2", report.table.probs(v, 0),
                report.table.probs(v, 1), report.table.probs(v, 2));
  return 0;
}
