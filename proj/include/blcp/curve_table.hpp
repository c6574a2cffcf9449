#pragma once

// Long-format result tables: one row per grid point, numeric and text
// columns, plus a metadata object echoing the run configuration.
//
// CSV layout: a first line "# <metadata as compact JSON>", a header row, then
// data rows. Numbers use 17 significant digits so a parse restores them
// exactly; non-finite values are written as inf, -inf, nan.
//
// JSON layout:
//   {"schema": "blcp.curve_table/1", "metadata": {...},
//    "columns": [{"name": "x", "type": "number"}, ...],
//    "rows": [[...], ...]}
// with non-finite numbers encoded as the strings "inf", "-inf", "nan".

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace blcp {

inline constexpr const char* kCurveTableSchema = "blcp.curve_table/1";

enum class OutputFormat { kCsv, kJson };

inline OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::kCsv;
  if (s == "json") return OutputFormat::kJson;
  throw std::invalid_argument("unknown format '" + s + "' (expected csv or json)");
}

inline const char* format_extension(OutputFormat f) { return f == OutputFormat::kCsv ? ".csv" : ".json"; }

struct CurveColumn {
  std::string name;
  bool text = false;
  std::vector<double> numbers;
  std::vector<std::string> strings;

  std::size_t size() const { return text ? strings.size() : numbers.size(); }
  friend bool operator==(const CurveColumn& a, const CurveColumn& b) {
    if (a.name != b.name || a.text != b.text) return false;
    if (a.text) return a.strings == b.strings;
    if (a.numbers.size() != b.numbers.size()) return false;
    for (std::size_t i = 0; i < a.numbers.size(); ++i) {
      const double x = a.numbers[i];
      const double y = b.numbers[i];
      if (std::isnan(x) && std::isnan(y)) continue;
      if (x != y) return false;
    }
    return true;
  }
};

namespace detail {

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline double parse_number(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::runtime_error("CurveTable: bad number '" + s + "'");
  return v;
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Splits one CSV record; quoted fields may contain separators and newlines.
inline bool read_csv_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  std::string field;
  bool quoted = false;
  bool any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (!any) return false;
  fields.push_back(std::move(field));
  return true;
}

inline nlohmann::ordered_json number_to_json(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

inline double number_from_json(const nlohmann::ordered_json& j) {
  if (j.is_string()) return parse_number(j.get<std::string>());
  return j.get<double>();
}

}  // namespace detail

class CurveTable {
 public:
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();

  CurveTable() = default;

  /// Declares the columns; "series" style label columns are text.
  CurveTable(std::initializer_list<std::string> numeric, std::initializer_list<std::string> text = {}) {
    for (const auto& n : text) add_column(n, true);
    for (const auto& n : numeric) add_column(n, false);
  }

  CurveTable& add_column(const std::string& name, bool text) {
    if (find(name) >= 0) throw std::invalid_argument("CurveTable: duplicate column " + name);
    if (rows() != 0) throw std::logic_error("CurveTable: add columns before rows");
    CurveColumn c;
    c.name = name;
    c.text = text;
    columns_.push_back(std::move(c));
    return *this;
  }

  /// One row; text values fill the text columns in order, numbers the rest.
  void add_row(const std::vector<std::string>& text, const std::vector<double>& numbers) {
    std::size_t ti = 0;
    std::size_t ni = 0;
    for (auto& c : columns_) {
      if (c.text) {
        if (ti >= text.size()) throw std::invalid_argument("CurveTable: missing text value");
        c.strings.push_back(text[ti++]);
      } else {
        if (ni >= numbers.size()) throw std::invalid_argument("CurveTable: missing number");
        c.numbers.push_back(numbers[ni++]);
      }
    }
    if (ti != text.size() || ni != numbers.size())
      throw std::invalid_argument("CurveTable: too many values in row");
  }

  std::size_t rows() const { return columns_.empty() ? 0 : columns_.front().size(); }
  const std::vector<CurveColumn>& columns() const { return columns_; }

  int find(const std::string& name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i)
      if (columns_[i].name == name) return static_cast<int>(i);
    return -1;
  }

  const std::vector<double>& numbers(const std::string& name) const {
    const auto& c = column(name);
    if (c.text) throw std::invalid_argument("CurveTable: column " + name + " is text");
    return c.numbers;
  }

  const std::vector<std::string>& strings(const std::string& name) const {
    const auto& c = column(name);
    if (!c.text) throw std::invalid_argument("CurveTable: column " + name + " is numeric");
    return c.strings;
  }

  void validate() const {
    for (const auto& c : columns_)
      if (c.size() != rows()) throw std::logic_error("CurveTable: ragged column " + c.name);
  }

  void write_csv(std::ostream& out) const {
    validate();
    out << "# " << metadata.dump() << "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i)
      out << (i ? "," : "") << detail::csv_quote(columns_[i].name);
    out << "\n";
    for (std::size_t r = 0; r < rows(); ++r) {
      for (std::size_t i = 0; i < columns_.size(); ++i) {
        const auto& c = columns_[i];
        out << (i ? "," : "")
            << (c.text ? detail::csv_quote(c.strings[r]) : detail::format_number(c.numbers[r]));
      }
      out << "\n";
    }
  }

  nlohmann::ordered_json to_json() const {
    validate();
    nlohmann::ordered_json j;
    j["schema"] = kCurveTableSchema;
    j["metadata"] = metadata;
    auto cols = nlohmann::ordered_json::array();
    for (const auto& c : columns_)
      cols.push_back({{"name", c.name}, {"type", c.text ? "string" : "number"}});
    j["columns"] = cols;
    auto rs = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < rows(); ++r) {
      auto row = nlohmann::ordered_json::array();
      for (const auto& c : columns_)
        row.push_back(c.text ? nlohmann::ordered_json(c.strings[r])
                             : detail::number_to_json(c.numbers[r]));
      rs.push_back(std::move(row));
    }
    j["rows"] = rs;
    return j;
  }

  void write(std::ostream& out, OutputFormat f) const {
    if (f == OutputFormat::kCsv) {
      write_csv(out);
    } else {
      out << to_json().dump(1) << "\n";
    }
  }

  void write_file(const std::string& path, OutputFormat f) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write(out, f);
    if (!out) throw std::runtime_error("write failed: " + path);
  }

  std::string to_string(OutputFormat f) const {
    std::ostringstream s;
    write(s, f);
    return s.str();
  }

  /// Text columns are recognized by the "type" entry in JSON. CSV has no
  /// types, so the caller names the text columns.
  static CurveTable from_csv(std::istream& in, const std::vector<std::string>& text_columns = {"series"}) {
    CurveTable t;
    std::string first;
    if (in.peek() == '#') {
      std::getline(in, first);
      const auto pos = first.find_first_not_of("# ");
      t.metadata = nlohmann::ordered_json::parse(first.substr(pos == std::string::npos ? 1 : pos));
    }
    std::vector<std::string> header;
    if (!detail::read_csv_record(in, header)) throw std::runtime_error("CurveTable: missing header");
    for (const auto& h : header) {
      bool text = false;
      for (const auto& tc : text_columns) text = text || tc == h;
      t.add_column(h, text);
    }
    std::vector<std::string> fields;
    while (detail::read_csv_record(in, fields)) {
      if (fields.size() == 1 && fields[0].empty()) continue;
      if (fields.size() != header.size())
        throw std::runtime_error("CurveTable: row has " + std::to_string(fields.size()) +
                                 " fields, expected " + std::to_string(header.size()));
      for (std::size_t i = 0; i < fields.size(); ++i) {
        auto& c = t.columns_[i];
        if (c.text) {
          c.strings.push_back(fields[i]);
        } else {
          c.numbers.push_back(detail::parse_number(fields[i]));
        }
      }
    }
    return t;
  }

  static CurveTable from_json(const nlohmann::ordered_json& j) {
    if (j.value("schema", std::string()) != kCurveTableSchema)
      throw std::runtime_error("CurveTable: unexpected schema");
    CurveTable t;
    t.metadata = j.at("metadata");
    for (const auto& c : j.at("columns")) t.add_column(c.at("name"), c.at("type") == "string");
    for (const auto& row : j.at("rows")) {
      if (row.size() != t.columns_.size()) throw std::runtime_error("CurveTable: bad row width");
      for (std::size_t i = 0; i < row.size(); ++i) {
        auto& c = t.columns_[i];
        if (c.text) {
          c.strings.push_back(row[i].get<std::string>());
        } else {
          c.numbers.push_back(detail::number_from_json(row[i]));
        }
      }
    }
    return t;
  }

  friend bool operator==(const CurveTable& a, const CurveTable& b) {
    return a.metadata == b.metadata && a.columns_ == b.columns_;
  }

 private:
  const CurveColumn& column(const std::string& name) const {
    const int i = find(name);
    if (i < 0) throw std::invalid_argument("CurveTable: no column " + name);
    return columns_[static_cast<std::size_t>(i)];
  }

  std::vector<CurveColumn> columns_;
};

}  // namespace blcp
