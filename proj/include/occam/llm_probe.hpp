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


#ifndef OCCAM_LLM_PROBE_HPP_
#define OCCAM_LLM_PROBE_HPP_

/// @file
/// Renders Boolean prompts as text, sends them to a chat-completions style
/// HTTP endpoint, parses the 0/1 answer and scores agreement with the
/// copy-bit and majority functions.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "occam/boolean.hpp"
#include "occam/numerics/bootstrap.hpp"
#include "occam/numerics/errors.hpp"
#include "occam/numerics/parallel.hpp"
#include "occam/numerics/rng.hpp"

namespace occam::llm_probe {

using boolean::Bits;
using boolean::BooleanPrompt;
using boolean::Example;

class TemplateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class EndpointError : public std::runtime_error {
 public:
  EndpointError(int status, const std::string& what) : std::runtime_error(what), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class AlignmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kExamplesSlot = "{examples}";
inline constexpr std::string_view kQuerySlot = "{query}";

inline constexpr std::string_view kDefaultTemplate =
    "Below are input-output pairs of a Boolean function. Each input is a list of bits and each output "
    "is a single bit. Reply with the output for the last input as a single digit (0 or 1).\n\n"
    "{examples}\n{query}";

// --- Rendering ----------------------------------------------------------------

inline std::string render_bits(const Bits& x) {
  std::string out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) out.push_back(' ');
    out.push_back(x[i] ? '1' : '0');
  }
  return out;
}

inline std::string render_examples(const std::vector<Example>& examples) {
  std::string out;
  for (const Example& e : examples) {
    out += "Input: " + render_bits(e.x) + "\nOutput: " + (e.y ? "1" : "0") + "\n";
  }
  return out;
}

inline std::string render_query(const Bits& query) { return "Input: " + render_bits(query) + "\nOutput:"; }

inline void validate_template(std::string_view tmpl) {
  for (auto slot : {kExamplesSlot, kQuerySlot}) {
    const auto first = tmpl.find(slot);
    if (first == std::string_view::npos) {
      throw TemplateError("template is missing the " + std::string(slot) + " slot");
    }
    if (tmpl.find(slot, first + 1) != std::string_view::npos) {
      throw TemplateError("template repeats the " + std::string(slot) + " slot");
    }
  }
}

inline std::string render_prompt(const BooleanPrompt& p, std::string_view tmpl = kDefaultTemplate) {
  validate_template(tmpl);
  std::string out(tmpl);
  out.replace(out.find(kExamplesSlot), kExamplesSlot.size(), render_examples(p.examples));
  out.replace(out.find(kQuerySlot), kQuerySlot.size(), render_query(p.query));
  return out;
}

struct ParsedPrompt {
  std::vector<Example> examples;
  std::optional<Bits> query;
};

/// Inverse of the example/query rendering; other lines are ignored.
inline ParsedPrompt parse_rendered_prompt(const std::string& text) {
  ParsedPrompt out;
  std::istringstream in(text);
  std::string line;
  std::optional<Bits> pending;
  auto parse_bits = [](std::string_view s) {
    Bits b;
    for (char c : s) {
      if (c == '0' || c == '1') b.push_back(static_cast<std::uint8_t>(c - '0'));
      else if (c != ' ') throw ParseError("parse_rendered_prompt: bad bit '" + std::string(1, c) + "'");
    }
    return b;
  };
  while (std::getline(in, line)) {
    if (line.rfind("Input: ", 0) == 0) {
      pending = parse_bits(std::string_view(line).substr(7));
    } else if (line.rfind("Output:", 0) == 0 && pending) {
      const std::string rest = line.substr(7);
      const auto pos = rest.find_first_not_of(' ');
      if (pos == std::string::npos) {
        out.query = std::move(pending);
      } else {
        out.examples.push_back({std::move(*pending), static_cast<std::uint8_t>(rest[pos] == '1')});
      }
      pending.reset();
    }
  }
  return out;
}

inline std::vector<Example> parse_rendered_examples(const std::string& text) {
  return parse_rendered_prompt(text).examples;
}

// --- Answers ------------------------------------------------------------------

/// First standalone '0' or '1' in the completion ("1." counts, "10" and "0.5" do not).
inline std::optional<std::uint8_t> parse_label(std::string_view completion) {
  auto digit = [&](std::size_t i) { return i < completion.size() && std::isdigit(static_cast<unsigned char>(completion[i])); };
  auto joins = [&](std::size_t i, std::size_t beyond) {
    const char c = completion[i];
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || (c == '.' && digit(beyond));
  };
  for (std::size_t i = 0; i < completion.size(); ++i) {
    const char c = completion[i];
    if (c != '0' && c != '1') continue;
    const bool left_ok = i == 0 || !joins(i - 1, i >= 2 ? i - 2 : completion.size());
    const bool right_ok = i + 1 == completion.size() || !joins(i + 1, i + 2);
    if (left_ok && right_ok) return static_cast<std::uint8_t>(c - '0');
  }
  return std::nullopt;
}

/// Bayes-rational answer to a rendered prompt: the posterior-weighted vote
/// over copy-bit and majority hypotheses. Returns "?" when nothing fits.
inline std::string oracle_completion(const std::string& text) {
  const ParsedPrompt parsed = parse_rendered_prompt(text);
  if (!parsed.query) return "?";
  try {
    const auto post = boolean::hypothesis_posterior(parsed.examples, parsed.query->size());
    return boolean::bayes_label(post, *parsed.query).label ? "1" : "0";
  } catch (const std::exception&) {
    return "?";
  }
}

// --- HTTP client ----------------------------------------------------------------

struct ProbeConfig {
  std::string endpoint_url = "http://127.0.0.1:8000/v1/chat/completions";
  std::string model_name = "gpt-4";
  std::string api_key_env = "OCCAM_ICL_API_KEY";  ///< read at request time, never stored
  double timeout_seconds = 30;
  std::size_t max_retries = 3;
  double temperature = 0;
  int max_tokens = 4;
  double backoff_initial_seconds = 0.5;
  std::size_t max_in_flight = 1;
};

struct Completion {
  std::string content;
  std::size_t retries = 0;
};

struct Endpoint {
  std::string scheme_host_port;
  std::string path;
};

inline Endpoint parse_endpoint(const std::string& url) {
  static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) throw DomainError("probe: endpoint must be an http(s) URL: " + url);
  return {m[1].str(), m[2].matched ? m[2].str() : std::string("/v1/chat/completions")};
}

inline std::string request_body(const ProbeConfig& cfg, const std::string& text) {
  nlohmann::json body = {
      {"model", cfg.model_name},
      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", text}}})},
      {"temperature", cfg.temperature},
      {"max_tokens", cfg.max_tokens},
  };
  return body.dump();
}

inline std::string extract_content(const std::string& body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("probe: response is not JSON: ") + e.what());
  }
  try {
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception&) {
    throw ProtocolError("probe: response has no choices[0].message.content");
  }
}

inline bool retryable_status(int status) { return status == 429 || status >= 500; }

/// One chat-completions POST with exponential backoff on transport errors
/// and 429/5xx.
inline Completion query_model(const ProbeConfig& cfg, const std::string& text) {
  const Endpoint ep = parse_endpoint(cfg.endpoint_url);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (ep.scheme_host_port.rfind("https", 0) == 0) {
    throw TransportError("probe: https endpoints need a build with TLS support");
  }
#endif
  httplib::Client client(ep.scheme_host_port);
  const auto secs = static_cast<time_t>(cfg.timeout_seconds);
  const auto usecs = static_cast<time_t>((cfg.timeout_seconds - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);

  httplib::Headers headers;
  if (const char* key = std::getenv(cfg.api_key_env.c_str()); key && *key) {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  const std::string body = request_body(cfg, text);

  std::string last_error;
  int last_status = 0;
  for (std::size_t attempt = 0;; ++attempt) {
    auto res = client.Post(ep.path, headers, body, "application/json");
    if (res && res->status >= 200 && res->status < 300) {
      return {extract_content(res->body), attempt};
    }
    if (res) {
      last_status = res->status;
      last_error = "HTTP " + std::to_string(res->status);
      if (!retryable_status(res->status)) break;
    } else {
      last_status = 0;
      last_error = httplib::to_string(res.error());
    }
    if (attempt >= cfg.max_retries) break;
    const double wait = cfg.backoff_initial_seconds * static_cast<double>(1ull << std::min<std::size_t>(attempt, 20));
    std::this_thread::sleep_for(std::chrono::duration<double>(wait));
  }
  if (last_status == 0) throw TransportError("probe: request failed: " + last_error);
  throw EndpointError(last_status, "probe: endpoint returned " + last_error);
}

// --- Runs and scoring ---------------------------------------------------------------

struct ProbePrompt {
  std::string id;
  BooleanPrompt prompt;
};

struct ProbeResult {
  std::string prompt_id;
  std::string raw_completion;
  std::optional<std::uint8_t> parsed_label;
  std::optional<bool> agree_simple;
  std::optional<bool> agree_complex;
  std::size_t retries = 0;
};

inline ProbeResult make_result(const ProbePrompt& p, std::string raw, std::size_t retries = 0) {
  ProbeResult r;
  r.prompt_id = p.id;
  r.raw_completion = std::move(raw);
  r.retries = retries;
  r.parsed_label = parse_label(r.raw_completion);
  if (r.parsed_label) {
    r.agree_simple = *r.parsed_label == p.prompt.query[0];
    r.agree_complex = *r.parsed_label == boolean::majority(p.prompt.query, p.prompt.triple);
  }
  return r;
}

using CompletionFn = std::function<Completion(const std::string&)>;

inline CompletionFn http_completion(ProbeConfig cfg) {
  return [cfg = std::move(cfg)](const std::string& text) { return query_model(cfg, text); };
}

/// Renders and answers every prompt, at most `max_in_flight` at a time.
/// Results come back in prompt order.
inline std::vector<ProbeResult> run_probe(const std::vector<ProbePrompt>& prompts, const CompletionFn& complete,
                                          std::string_view tmpl = kDefaultTemplate, std::size_t max_in_flight = 1) {
  validate_template(tmpl);
  return parallel_map(prompts.size(), std::max<std::size_t>(max_in_flight, 1), [&](std::size_t i) {
    const Completion c = complete(render_prompt(prompts[i].prompt, tmpl));
    return make_result(prompts[i], c.content, c.retries);
  });
}

struct ScoreRow {
  std::size_t n_examples = 0;
  std::size_t d = 0;
  boolean::Mode mode = boolean::Mode::kAmbiguous;
  MeanInterval agree_simple;
  MeanInterval agree_complex;
  double unparseable_rate = 0;
  std::size_t prompts = 0;
};

inline const std::vector<std::string>& score_columns() {
  static const std::vector<std::string> cols = {
      "n_examples",         "d",                 "mode",
      "agree_simple_mean",  "agree_simple_lo",   "agree_simple_hi",
      "agree_complex_mean", "agree_complex_lo",  "agree_complex_hi",
      "unparseable_rate"};
  return cols;
}

/// Per-(n, d, mode) agreement means with bootstrap intervals. Unparseable
/// completions count only toward unparseable_rate. Rows are sorted by
/// (n, d, mode); cell k resamples with rng.child(2k) and rng.child(2k + 1).
inline std::vector<ScoreRow> score_run(const std::vector<ProbePrompt>& prompts, const std::vector<ProbeResult>& results,
                                       const Rng& rng, std::size_t resamples = kDefaultBootstrapResamples) {
  std::map<std::string, const ProbeResult*> by_id;
  for (const ProbeResult& r : results) {
    if (!by_id.emplace(r.prompt_id, &r).second) throw AlignmentError("score_run: duplicate result id " + r.prompt_id);
  }
  if (by_id.size() != prompts.size()) throw AlignmentError("score_run: result count does not match prompts");

  using Key = std::tuple<std::size_t, std::size_t, int>;
  struct Cell {
    std::vector<double> simple, complex;
    std::size_t total = 0, unparseable = 0;
  };
  std::map<Key, Cell> cells;
  for (const ProbePrompt& p : prompts) {
    const auto it = by_id.find(p.id);
    if (it == by_id.end()) throw AlignmentError("score_run: no result for prompt " + p.id);
    const ProbeResult& r = *it->second;
    Cell& cell = cells[{p.prompt.examples.size(), p.prompt.dim, static_cast<int>(p.prompt.mode)}];
    ++cell.total;
    if (!r.parsed_label) {
      ++cell.unparseable;
      continue;
    }
    cell.simple.push_back(*r.agree_simple ? 1.0 : 0.0);
    cell.complex.push_back(*r.agree_complex ? 1.0 : 0.0);
  }

  std::vector<ScoreRow> rows;
  std::uint64_t index = 0;
  for (const auto& [key, cell] : cells) {
    ScoreRow row;
    row.n_examples = std::get<0>(key);
    row.d = std::get<1>(key);
    row.mode = static_cast<boolean::Mode>(std::get<2>(key));
    row.prompts = cell.total;
    row.unparseable_rate = static_cast<double>(cell.unparseable) / static_cast<double>(cell.total);
    row.agree_simple = bootstrap_mean(cell.simple, rng.child(2 * index), resamples);
    row.agree_complex = bootstrap_mean(cell.complex, rng.child(2 * index + 1), resamples);
    rows.push_back(row);
    ++index;
  }
  return rows;
}

}  // namespace occam::llm_probe

#endif  // OCCAM_LLM_PROBE_HPP_
