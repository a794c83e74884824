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


#ifndef OCCAM_HARNESS_REPORT_HPP_
#define OCCAM_HARNESS_REPORT_HPP_

/// @file
/// Typed result tables and their CSV / JSON forms. Reals are printed with
/// 12 significant digits everywhere; non-finite reals become the strings
/// "NaN", "Infinity" and "-Infinity".

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <cstdlib>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "occam/harness/config.hpp"

namespace occam::harness {

using Cell = std::variant<std::int64_t, double, std::string>;

enum class ColumnType { kInt, kReal, kText };

inline const char* to_string(ColumnType t) {
  switch (t) {
    case ColumnType::kInt: return "int";
    case ColumnType::kReal: return "real";
    case ColumnType::kText: return "text";
  }
  return "?";
}

inline ColumnType column_type_from(const std::string& s) {
  if (s == "int") return ColumnType::kInt;
  if (s == "real") return ColumnType::kReal;
  if (s == "text") return ColumnType::kText;
  throw IoError("report: unknown column type '" + s + "'");
}

struct Column {
  std::string name;
  ColumnType type;
  friend bool operator==(const Column&, const Column&) = default;
};

inline Column int_col(std::string n) { return {std::move(n), ColumnType::kInt}; }
inline Column real_col(std::string n) { return {std::move(n), ColumnType::kReal}; }
inline Column text_col(std::string n) { return {std::move(n), ColumnType::kText}; }

/// Shortest text holding 12 significant digits.
inline std::string format_real(double x) {
  if (std::isnan(x)) return "NaN";
  if (std::isinf(x)) return x > 0 ? "Infinity" : "-Infinity";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// x after a trip through format_real.
inline double round_real(double x) {
  if (!std::isfinite(x)) return x;
  return std::strtod(format_real(x).c_str(), nullptr);
}

inline double parse_real(const std::string& s) {
  if (s == "NaN") return std::numeric_limits<double>::quiet_NaN();
  if (s == "Infinity") return std::numeric_limits<double>::infinity();
  if (s == "-Infinity") return -std::numeric_limits<double>::infinity();
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw IoError("report: '" + s + "' is not a real number");
  return v;
}

class Table {
 public:
  Table() = default;
  Table(std::string name, std::vector<Column> columns) : name_(std::move(name)), columns_(std::move(columns)) {}

  const std::string& name() const noexcept { return name_; }
  const std::vector<Column>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }

  /// Appends a row; each cell must match its column's type. Reals are
  /// stored rounded to their printed precision.
  void add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) {
      throw std::invalid_argument("table " + name_ + ": row has " + std::to_string(row.size()) + " cells, expected " +
                                  std::to_string(columns_.size()));
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
      const std::size_t want = static_cast<std::size_t>(columns_[i].type);
      if (row[i].index() != want) {
        throw std::invalid_argument("table " + name_ + ": column " + columns_[i].name + " expects " +
                                    to_string(columns_[i].type));
      }
      if (auto* r = std::get_if<double>(&row[i])) *r = round_real(*r);
    }
    rows_.push_back(std::move(row));
  }

  std::size_t column_index(const std::string& col) const {
    for (std::size_t i = 0; i < columns_.size(); ++i)
      if (columns_[i].name == col) return i;
    throw std::out_of_range("table " + name_ + ": no column " + col);
  }

  double real(std::size_t row, const std::string& col) const { return std::get<double>(rows_.at(row)[column_index(col)]); }
  std::int64_t integer(std::size_t row, const std::string& col) const {
    return std::get<std::int64_t>(rows_.at(row)[column_index(col)]);
  }
  const std::string& text(std::size_t row, const std::string& col) const {
    return std::get<std::string>(rows_.at(row)[column_index(col)]);
  }

  friend bool operator==(const Table& a, const Table& b) {
    if (a.name_ != b.name_ || a.columns_ != b.columns_ || a.rows_.size() != b.rows_.size()) return false;
    for (std::size_t r = 0; r < a.rows_.size(); ++r) {
      for (std::size_t c = 0; c < a.columns_.size(); ++c) {
        const Cell& x = a.rows_[r][c];
        const Cell& y = b.rows_[r][c];
        if (x.index() != y.index()) return false;
        if (const auto* dx = std::get_if<double>(&x)) {
          const double dy = std::get<double>(y);
          if (!(*dx == dy || (std::isnan(*dx) && std::isnan(dy)))) return false;
        } else if (x != y) {
          return false;
        }
      }
    }
    return true;
  }

 private:
  std::string name_;
  std::vector<Column> columns_;
  std::vector<std::vector<Cell>> rows_;
};

struct Report {
  std::string experiment;
  std::string version;
  Json config;
  double wall_clock_seconds = 0;
  std::vector<Table> tables;

  const Table& table(const std::string& name) const {
    for (const Table& t : tables)
      if (t.name() == name) return t;
    throw std::out_of_range("report: no table " + name);
  }
};

inline std::string format_cell(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return format_real(*d);
  return std::get<std::string>(c);
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline std::string to_csv(const Table& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.columns().size(); ++i) os << (i ? "," : "") << csv_escape(t.columns()[i].name);
  os << '\n';
  for (const auto& row : t.rows()) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(format_cell(row[i]));
    os << '\n';
  }
  return os.str();
}

namespace detail {

inline Json cell_to_json(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return format_real(*d);
    return round_real(*d);
  }
  return std::get<std::string>(c);
}

inline Cell cell_from_json(const Json& j, ColumnType type) {
  switch (type) {
    case ColumnType::kInt:
      if (!j.is_number_integer()) throw IoError("report: expected integer cell, got " + j.dump());
      return j.get<std::int64_t>();
    case ColumnType::kReal:
      if (j.is_string()) return parse_real(j.get<std::string>());
      if (!j.is_number()) throw IoError("report: expected real cell, got " + j.dump());
      return j.get<double>();
    case ColumnType::kText:
      if (!j.is_string()) throw IoError("report: expected text cell, got " + j.dump());
      return j.get<std::string>();
  }
  throw IoError("report: bad column type");
}

}  // namespace detail

inline Json table_to_json(const Table& t) {
  Json cols = Json::array();
  for (const Column& c : t.columns()) cols.push_back({{"name", c.name}, {"type", to_string(c.type)}});
  Json rows = Json::array();
  for (const auto& row : t.rows()) {
    Json r = Json::array();
    for (const Cell& c : row) r.push_back(detail::cell_to_json(c));
    rows.push_back(std::move(r));
  }
  return {{"name", t.name()}, {"columns", std::move(cols)}, {"rows", std::move(rows)}};
}

inline Table table_from_json(const Json& j) {
  std::vector<Column> cols;
  for (const Json& c : j.at("columns")) {
    cols.push_back({c.at("name").get<std::string>(), column_type_from(c.at("type").get<std::string>())});
  }
  Table t(j.at("name").get<std::string>(), cols);
  for (const Json& r : j.at("rows")) {
    if (!r.is_array() || r.size() != cols.size()) throw IoError("report: row width mismatch in " + t.name());
    std::vector<Cell> row;
    for (std::size_t i = 0; i < cols.size(); ++i) row.push_back(detail::cell_from_json(r[i], cols[i].type));
    t.add_row(std::move(row));
  }
  return t;
}

inline Json report_to_json(const Report& r) {
  Json tables = Json::array();
  for (const Table& t : r.tables) tables.push_back(table_to_json(t));
  return {{"experiment", r.experiment},
          {"version", r.version},
          {"config", r.config},
          {"wall_clock_seconds", round_real(r.wall_clock_seconds)},
          {"tables", std::move(tables)}};
}

inline Report report_from_json(const Json& j) {
  try {
    Report r;
    r.experiment = j.at("experiment").get<std::string>();
    r.version = j.at("version").get<std::string>();
    r.config = j.at("config");
    r.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
    for (const Json& t : j.at("tables")) r.tables.push_back(table_from_json(t));
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("report: malformed JSON: ") + e.what());
  }
}

namespace detail {

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace detail

inline void emit_csv(const Table& t, const std::filesystem::path& path) { detail::write_text(path, to_csv(t)); }

inline void emit_json(const Report& r, const std::filesystem::path& path) {
  detail::write_text(path, report_to_json(r).dump(2) + "\n");
}

inline Report load_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  const Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw IoError(path.string() + " is not valid JSON");
  return report_from_json(j);
}

/// report.json plus <table>.csv for every table; returns the files written.
inline std::vector<std::filesystem::path> write_report(const Report& r, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string() + (ec ? ": " + ec.message() : ""));
  }
  std::vector<std::filesystem::path> files;
  files.push_back(dir / "report.json");
  emit_json(r, files.back());
  for (const Table& t : r.tables) {
    files.push_back(dir / (t.name() + ".csv"));
    emit_csv(t, files.back());
  }
  return files;
}

}  // namespace occam::harness

#endif  // OCCAM_HARNESS_REPORT_HPP_
