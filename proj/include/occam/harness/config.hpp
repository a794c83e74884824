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


#ifndef OCCAM_HARNESS_CONFIG_HPP_
#define OCCAM_HARNESS_CONFIG_HPP_

/// @file
/// Run configuration: a JSON document
///
///   {"experiment": "...", "seed": 0, "trials": 0, "threads": 1, "params": {...}}
///
/// merged as defaults < config file < command-line flags, with every
/// parameter validated against the experiment's declared specs.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace occam::harness {

using Json = nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error("config field '" + field + "': " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ParamKind { kInt, kDouble, kString, kBool, kIntList, kDoubleList, kStringList, kDoubleMatrix };

inline const char* kind_name(ParamKind k) {
  switch (k) {
    case ParamKind::kInt: return "integer";
    case ParamKind::kDouble: return "number";
    case ParamKind::kString: return "string";
    case ParamKind::kBool: return "boolean";
    case ParamKind::kIntList: return "list of integers";
    case ParamKind::kDoubleList: return "list of numbers";
    case ParamKind::kStringList: return "list of strings";
    case ParamKind::kDoubleMatrix: return "list of lists of numbers";
  }
  return "?";
}

struct ParamSpec {
  ParamSpec(std::string name_, ParamKind kind_, Json default_value_, std::string help_,
            double min_ = -std::numeric_limits<double>::infinity(), std::vector<std::string> choices_ = {})
      : name(std::move(name_)),
        kind(kind_),
        default_value(std::move(default_value_)),
        help(std::move(help_)),
        min(min_),
        choices(std::move(choices_)) {}

  std::string name;
  ParamKind kind;
  Json default_value;
  std::string help;
  double min;                        ///< for numeric kinds, elementwise
  std::vector<std::string> choices;  ///< for string kinds, if non-empty
};

struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 0;
  std::size_t trials = 0;  ///< 0 selects the experiment default
  std::size_t threads = 1;
  Json params = Json::object();

  Json to_json() const {
    return Json{{"experiment", experiment}, {"seed", seed}, {"trials", trials}, {"threads", threads}, {"params", params}};
  }
};

namespace detail {

inline bool is_integer(const Json& j) {
  if (j.is_number_integer()) return true;
  if (!j.is_number_float()) return false;
  const double v = j.get<double>();
  return std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9.0e15;
}

inline Json normalize_scalar(const ParamSpec& spec, const Json& j, ParamKind kind, const std::string& field) {
  auto bad = [&] { return ConfigError(field, std::string("expected ") + kind_name(spec.kind) + ", got " + j.dump()); };
  switch (kind) {
    case ParamKind::kInt: {
      if (!is_integer(j)) throw bad();
      const auto v = j.is_number_integer() ? j.get<std::int64_t>() : static_cast<std::int64_t>(j.get<double>());
      if (static_cast<double>(v) < spec.min) throw ConfigError(field, "must be >= " + Json(spec.min).dump());
      return v;
    }
    case ParamKind::kDouble: {
      if (!j.is_number()) throw bad();
      const double v = j.get<double>();
      if (!std::isfinite(v)) throw bad();
      if (v < spec.min) throw ConfigError(field, "must be >= " + Json(spec.min).dump());
      return v;
    }
    case ParamKind::kString: {
      if (!j.is_string()) throw bad();
      if (!spec.choices.empty()) {
        const auto s = j.get<std::string>();
        bool ok = false;
        for (const auto& c : spec.choices) ok = ok || c == s;
        if (!ok) throw ConfigError(field, "'" + s + "' is not one of " + Json(spec.choices).dump());
      }
      return j;
    }
    case ParamKind::kBool:
      if (!j.is_boolean()) throw bad();
      return j;
    default:
      throw bad();
  }
}

}  // namespace detail

/// Checks a parameter value against its spec and returns it in canonical form.
inline Json normalize_param(const ParamSpec& spec, const Json& j, const std::string& field) {
  auto list_of = [&](ParamKind elem) {
    if (!j.is_array()) throw ConfigError(field, std::string("expected ") + kind_name(spec.kind) + ", got " + j.dump());
    Json out = Json::array();
    for (std::size_t i = 0; i < j.size(); ++i) {
      out.push_back(detail::normalize_scalar(spec, j[i], elem, field + "[" + std::to_string(i) + "]"));
    }
    return out;
  };
  switch (spec.kind) {
    case ParamKind::kIntList: return list_of(ParamKind::kInt);
    case ParamKind::kDoubleList: return list_of(ParamKind::kDouble);
    case ParamKind::kStringList: return list_of(ParamKind::kString);
    case ParamKind::kDoubleMatrix: {
      if (!j.is_array()) throw ConfigError(field, "expected a list of lists of numbers");
      Json out = Json::array();
      for (std::size_t i = 0; i < j.size(); ++i) {
        ParamSpec row = spec;
        row.kind = ParamKind::kDoubleList;
        out.push_back(normalize_param(row, j[i], field + "[" + std::to_string(i) + "]"));
      }
      return out;
    }
    default: return detail::normalize_scalar(spec, j, spec.kind, field);
  }
}

/// Reads a command-line value: JSON first, then a comma list for list kinds,
/// then a bare string for string kinds.
inline Json parse_cli_value(const ParamSpec& spec, const std::string& text) {
  const std::string field = "params." + spec.name;
  Json parsed = Json::parse(text, nullptr, false);
  const bool is_list = spec.kind == ParamKind::kIntList || spec.kind == ParamKind::kDoubleList ||
                       spec.kind == ParamKind::kStringList;
  if (!parsed.is_discarded()) {
    if (is_list && !parsed.is_array() && !parsed.is_discarded()) parsed = Json::array({parsed});
    if (spec.kind == ParamKind::kString && !parsed.is_string()) parsed = text;
    if (spec.kind == ParamKind::kStringList && parsed.is_array()) {
      for (auto& e : parsed)
        if (!e.is_string()) e = e.dump();
    }
    return normalize_param(spec, parsed, field);
  }
  if (is_list) {
    Json out = Json::array();
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      Json e = Json::parse(item, nullptr, false);
      out.push_back(spec.kind == ParamKind::kStringList || e.is_discarded() ? Json(item) : e);
    }
    return normalize_param(spec, out, field);
  }
  return normalize_param(spec, Json(text), field);
}

/// Parses the top-level document; rejects unknown or ill-typed fields.
inline ExperimentConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("<root>", "config must be a JSON object");
  ExperimentConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "experiment") {
      if (!value.is_string()) throw ConfigError(key, "expected string");
      c.experiment = value.get<std::string>();
    } else if (key == "seed" || key == "trials" || key == "threads") {
      if (!detail::is_integer(value) || value.get<double>() < 0) throw ConfigError(key, "expected a non-negative integer");
      const auto v = value.is_number_unsigned() ? value.get<std::uint64_t>()
                                                : static_cast<std::uint64_t>(value.get<double>());
      if (key == "seed") c.seed = v;
      if (key == "trials") c.trials = static_cast<std::size_t>(v);
      if (key == "threads") c.threads = static_cast<std::size_t>(v);
    } else if (key == "params") {
      if (!value.is_object()) throw ConfigError(key, "expected an object");
      c.params = value;
    } else {
      throw ConfigError(key, "unknown field");
    }
  }
  return c;
}

inline ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ConfigError("<root>", "config file " + path + " is not valid JSON");
  return config_from_json(j);
}

/// Fills defaults and validates params; unknown names are rejected.
inline Json resolve_params(const std::vector<ParamSpec>& specs, const Json& given) {
  Json out = Json::object();
  for (const auto& [key, value] : given.items()) {
    bool known = false;
    for (const auto& s : specs) known = known || s.name == key;
    if (!known) throw ConfigError("params." + key, "unknown parameter");
  }
  for (const ParamSpec& s : specs) {
    const auto it = given.find(s.name);
    out[s.name] = normalize_param(s, it == given.end() ? s.default_value : *it, "params." + s.name);
  }
  return out;
}

// Typed accessors for resolved params.
inline std::int64_t get_int(const Json& p, const std::string& k) { return p.at(k).get<std::int64_t>(); }
inline std::size_t get_size(const Json& p, const std::string& k) { return p.at(k).get<std::size_t>(); }
inline double get_double(const Json& p, const std::string& k) { return p.at(k).get<double>(); }
inline bool get_bool(const Json& p, const std::string& k) { return p.at(k).get<bool>(); }
inline std::string get_string(const Json& p, const std::string& k) { return p.at(k).get<std::string>(); }
inline std::vector<std::size_t> get_sizes(const Json& p, const std::string& k) {
  return p.at(k).get<std::vector<std::size_t>>();
}
inline std::vector<double> get_doubles(const Json& p, const std::string& k) { return p.at(k).get<std::vector<double>>(); }
inline std::vector<std::vector<double>> get_matrix(const Json& p, const std::string& k) {
  return p.at(k).get<std::vector<std::vector<double>>>();
}

}  // namespace occam::harness

#endif  // OCCAM_HARNESS_CONFIG_HPP_
