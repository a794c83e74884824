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


// Renders one ambiguous Boolean prompt as it would be sent to a model and
// shows which hypotheses survive the examples.

#include <cstdio>
#include <iostream>

#include "occam/boolean.hpp"
#include "occam/llm_probe.hpp"

int main() {
  using namespace occam;
  Rng rng(7);
  const boolean::BooleanPrompt p = boolean::gen_prompt(rng, 5, 6, boolean::Mode::kAmbiguous);
  std::cout << llm_probe::render_prompt(p) << "\n\n";

  const auto post = boolean::hypothesis_posterior(p.examples, p.dim);
  std::printf("generating triple: (%zu, %zu, %zu)\n", p.triple[0], p.triple[1], p.triple[2]);
  std::printf("p(simple family | examples) = %.4f\n", post.family_posterior[0]);
  for (std::size_t i = 0; i < p.dim; ++i)
    if (post.simple_mass[i] > 0) std::printf("  copy bit %zu: %.4f\n", i, post.simple_mass[i]);
  for (std::size_t k = 0; k < post.triples.size(); ++k)
    if (post.complex_mass[k] > 0)
      std::printf("  majority(%zu,%zu,%zu): %.4f\n", post.triples[k][0], post.triples[k][1], post.triples[k][2],
                  post.complex_mass[k]);
  const auto d = boolean::bayes_label(post, p.query);
  std::printf("bayes label %d (P(1) = %.4f); copy-bit-0 says %d, majority says %d\n", d.label, d.p_one, p.query[0],
              boolean::majority(p.query, p.triple));
  return 0;
}
