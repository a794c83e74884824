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

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "occam/llm_probe.hpp"
#include "support/stub_server.hpp"

namespace occam::llm_probe {
namespace {

using occam::testing::StubServer;

ProbeConfig fast_config(const std::string& url) {
  ProbeConfig cfg;
  cfg.endpoint_url = url;
  cfg.model_name = "stub-model";
  cfg.timeout_seconds = 5;
  cfg.max_retries = 3;
  cfg.backoff_initial_seconds = 0.001;
  cfg.api_key_env = "OCCAM_ICL_TEST_KEY";
  return cfg;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

std::vector<ProbePrompt> make_prompts(std::uint64_t seed, std::size_t per_cell) {
  std::vector<ProbePrompt> out;
  for (std::size_t n : {2u, 6u})
    for (auto mode : {boolean::Mode::kAmbiguous, boolean::Mode::kComplex})
      for (std::size_t i = 0; i < per_cell; ++i) {
        Rng rng(seed, out.size());
        out.push_back({"p" + std::to_string(out.size()), boolean::gen_prompt(rng, 5, n, mode)});
      }
  return out;
}

// --- Rendering -------------------------------------------------------------------

TEST(RenderPromptTest, Structure) {
  BooleanPrompt p;
  p.dim = 5;
  p.triple = {1, 3, 4};
  p.examples = {{{1, 0, 1, 1, 1}, 1}};
  p.query = {1, 0, 0, 0, 1};
  const std::string text = render_prompt(p);
  EXPECT_EQ(count(text, "Input:"), 2u);
  EXPECT_NE(text.find("Input: 1 0 1 1 1\nOutput: 1\n"), std::string::npos);
  const std::string tail = "Input: 1 0 0 0 1\nOutput:";
  EXPECT_EQ(text.substr(text.size() - tail.size()), tail);
  EXPECT_EQ(render_prompt(p), text);
}

TEST(RenderPromptTest, CustomTemplateAndErrors) {
  BooleanPrompt p;
  p.dim = 5;
  p.examples = {{{0, 0, 0, 0, 0}, 0}};
  p.query = {1, 1, 0, 0, 0};
  EXPECT_EQ(render_prompt(p, "[{examples}|{query}]"), "[Input: 0 0 0 0 0\nOutput: 0\n|Input: 1 1 0 0 0\nOutput:]");
  EXPECT_THROW(render_prompt(p, "{examples} only"), TemplateError);
  EXPECT_THROW(render_prompt(p, "{query} only"), TemplateError);
  EXPECT_THROW(render_prompt(p, "{examples}{query}{query}"), TemplateError);
}

TEST(RenderPromptTest, RoundTripRecoversExamplesAndQuery) {
  Rng rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const BooleanPrompt p =
        boolean::gen_prompt(rng, 5 + rng.uniform_int(3), 1 + rng.uniform_int(12), boolean::Mode::kAmbiguous);
    const ParsedPrompt parsed = parse_rendered_prompt(render_prompt(p));
    ASSERT_EQ(parsed.examples.size(), p.examples.size());
    for (std::size_t i = 0; i < p.examples.size(); ++i) {
      EXPECT_EQ(parsed.examples[i].x, p.examples[i].x);
      EXPECT_EQ(parsed.examples[i].y, p.examples[i].y);
    }
    ASSERT_TRUE(parsed.query);
    EXPECT_EQ(*parsed.query, p.query);
  }
}

// --- Label parsing ----------------------------------------------------------------

TEST(ParseLabelTest, StandaloneDigits) {
  EXPECT_EQ(parse_label("0"), 0);
  EXPECT_EQ(parse_label(" 1"), 1);
  EXPECT_EQ(parse_label("1."), 1);
  EXPECT_EQ(parse_label("Output: 0\n"), 0);
  EXPECT_EQ(parse_label("The answer is 1, not 0"), 1);
  EXPECT_EQ(parse_label("10 or 0"), 0);
  EXPECT_FALSE(parse_label("10"));
  EXPECT_FALSE(parse_label("0.5"));
  EXPECT_FALSE(parse_label("x1"));
  EXPECT_FALSE(parse_label(""));
  EXPECT_FALSE(parse_label("yes"));
}

// --- HTTP client -------------------------------------------------------------------

TEST(QueryModelTest, EchoStubAndRequestShape) {
  StubServer server([](const nlohmann::json&, int) { return StubServer::Reply{200, StubServer::completion_body("0")}; });
  const Completion c = query_model(fast_config(server.url()), "hello");
  EXPECT_EQ(c.content, "0");
  EXPECT_EQ(c.retries, 0u);
  const auto reqs = server.requests();
  ASSERT_EQ(reqs.size(), 1u);
  EXPECT_EQ(reqs[0]["model"], "stub-model");
  EXPECT_EQ(reqs[0]["messages"][0]["role"], "user");
  EXPECT_EQ(reqs[0]["messages"][0]["content"], "hello");
  EXPECT_EQ(reqs[0]["temperature"], 0.0);
  EXPECT_EQ(reqs[0]["max_tokens"], 4);
}

TEST(QueryModelTest, RetriesRateLimitThenSucceeds) {
  StubServer server([](const nlohmann::json&, int i) {
    if (i < 2) return StubServer::Reply{429, "{}"};
    return StubServer::Reply{200, StubServer::completion_body("1")};
  });
  const Completion c = query_model(fast_config(server.url()), "q");
  EXPECT_EQ(c.content, "1");
  EXPECT_EQ(c.retries, 2u);
  EXPECT_EQ(server.calls(), 3);
}

TEST(QueryModelTest, ServerErrorsExhaustRetries) {
  StubServer server([](const nlohmann::json&, int) { return StubServer::Reply{503, "{}"}; });
  try {
    query_model(fast_config(server.url()), "q");
    FAIL() << "expected EndpointError";
  } catch (const EndpointError& e) {
    EXPECT_EQ(e.status(), 503);
  }
  EXPECT_EQ(server.calls(), 4);
}

TEST(QueryModelTest, ClientErrorIsNotRetried) {
  StubServer server([](const nlohmann::json&, int) { return StubServer::Reply{400, "{}"}; });
  EXPECT_THROW(query_model(fast_config(server.url()), "q"), EndpointError);
  EXPECT_EQ(server.calls(), 1);
}

TEST(QueryModelTest, MalformedResponsesAreProtocolErrors) {
  StubServer garbage([](const nlohmann::json&, int) { return StubServer::Reply{200, "not json"}; });
  EXPECT_THROW(query_model(fast_config(garbage.url()), "q"), ProtocolError);
  StubServer missing([](const nlohmann::json&, int) { return StubServer::Reply{200, R"({"choices": []})"}; });
  EXPECT_THROW(query_model(fast_config(missing.url()), "q"), ProtocolError);
}

TEST(QueryModelTest, UnreachableEndpointIsTransportError) {
  ProbeConfig cfg = fast_config("http://127.0.0.1:1/v1/chat/completions");
  cfg.max_retries = 1;
  EXPECT_THROW(query_model(cfg, "q"), TransportError);
  EXPECT_THROW(query_model(fast_config("ftp://example"), "q"), DomainError);
}

TEST(QueryModelTest, ApiKeyGoesInHeaderOnly) {
  StubServer server([](const nlohmann::json&, int) { return StubServer::Reply{200, StubServer::completion_body("1")}; });
  ::setenv("OCCAM_ICL_TEST_KEY", "sk-test-secret", 1);
  query_model(fast_config(server.url()), "q");
  ::unsetenv("OCCAM_ICL_TEST_KEY");
  query_model(fast_config(server.url()), "q");
  const auto auth = server.auth_headers();
  EXPECT_EQ(auth[0], "Bearer sk-test-secret");
  EXPECT_EQ(auth[1], "");
  for (const auto& r : server.requests()) EXPECT_EQ(r.dump().find("sk-test-secret"), std::string::npos);
}

TEST(ParseEndpointTest, DefaultsPath) {
  EXPECT_EQ(parse_endpoint("http://host:99").path, "/v1/chat/completions");
  EXPECT_EQ(parse_endpoint("http://host:99").scheme_host_port, "http://host:99");
  EXPECT_EQ(parse_endpoint("https://api.example.com/x/y").path, "/x/y");
}

// --- Scoring ------------------------------------------------------------------------

TEST(ScoreRunTest, SimpleLabelsScoreOneAndZero) {
  const auto prompts = make_prompts(2, 10);
  std::vector<ProbeResult> results;
  for (const auto& p : prompts) results.push_back(make_result(p, p.prompt.query[0] ? "1" : "0"));
  const auto rows = score_run(prompts, results, Rng(3));
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& row : rows) {
    EXPECT_EQ(row.agree_simple.mean, 1.0);
    EXPECT_EQ(row.agree_complex.mean, 0.0);
    EXPECT_EQ(row.unparseable_rate, 0.0);
    EXPECT_EQ(row.prompts, 10u);
  }
  EXPECT_EQ(rows[0].n_examples, 2u);
  EXPECT_EQ(rows[0].mode, boolean::Mode::kAmbiguous);
  EXPECT_EQ(rows[3].n_examples, 6u);
  EXPECT_EQ(rows[3].mode, boolean::Mode::kComplex);
}

TEST(ScoreRunTest, AllUnparseable) {
  const auto prompts = make_prompts(4, 5);
  std::vector<ProbeResult> results;
  for (const auto& p : prompts) results.push_back(make_result(p, "I am not sure"));
  for (const auto& row : score_run(prompts, results, Rng(5))) {
    EXPECT_TRUE(std::isnan(row.agree_simple.mean));
    EXPECT_TRUE(std::isnan(row.agree_complex.hi));
    EXPECT_EQ(row.unparseable_rate, 1.0);
  }
}

TEST(ScoreRunTest, AgreementsAreComplementaryAndScoringIsPure) {
  const auto prompts = make_prompts(6, 8);
  std::vector<ProbeResult> results;
  Rng coin(7);
  for (const auto& p : prompts) {
    const auto u = coin.uniform_int(3);
    results.push_back(make_result(p, u == 0 ? "0" : u == 1 ? "1" : "??"));
  }
  for (const auto& r : results) {
    if (r.parsed_label) {
      EXPECT_NE(*r.agree_simple, *r.agree_complex);
    } else {
      EXPECT_FALSE(r.agree_simple);
    }
  }
  const auto a = score_run(prompts, results, Rng(8));
  const auto b = score_run(prompts, results, Rng(8));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].agree_simple.lo, b[i].agree_simple.lo);
    EXPECT_EQ(a[i].agree_complex.hi, b[i].agree_complex.hi);
  }
}

TEST(ScoreRunTest, AlignmentErrors) {
  const auto prompts = make_prompts(9, 2);
  std::vector<ProbeResult> results;
  for (const auto& p : prompts) results.push_back(make_result(p, "0"));
  auto missing = results;
  missing.pop_back();
  EXPECT_THROW(score_run(prompts, missing, Rng(1)), AlignmentError);
  auto renamed = results;
  renamed[0].prompt_id = "nope";
  EXPECT_THROW(score_run(prompts, renamed, Rng(1)), AlignmentError);
  auto dup = results;
  dup[1].prompt_id = dup[0].prompt_id;
  EXPECT_THROW(score_run(prompts, dup, Rng(1)), AlignmentError);
}

// --- Closed loop ---------------------------------------------------------------------

TEST(RunProbeTest, BayesStubReproducesOracleLabels) {
  StubServer server([](const nlohmann::json& req, int) {
    const std::string text = req["messages"][0]["content"];
    return StubServer::Reply{200, StubServer::completion_body(oracle_completion(text))};
  });
  const auto prompts = make_prompts(10, 15);
  ProbeConfig cfg = fast_config(server.url());
  const auto results = run_probe(prompts, http_completion(cfg), kDefaultTemplate, 4);
  ASSERT_EQ(results.size(), prompts.size());
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    EXPECT_EQ(results[i].prompt_id, prompts[i].id);
    const auto& bp = prompts[i].prompt;
    const auto want = boolean::bayes_label(boolean::hypothesis_posterior(bp.examples, bp.dim), bp.query).label;
    ASSERT_TRUE(results[i].parsed_label);
    EXPECT_EQ(*results[i].parsed_label, want);
  }
  EXPECT_EQ(server.calls(), static_cast<int>(prompts.size()));
}

}  // namespace
}  // namespace occam::llm_probe
