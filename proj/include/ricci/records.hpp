#pragma once

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ricci {

enum class OutputFormat { JsonLines, Csv };

/// Flat key-value row. Values keep their type so JSON output can emit bare
/// numbers; doubles are serialized with 17 significant digits so emitted
/// records re-parse to the same values.
struct Record {
  using Value = std::variant<std::string, double, std::int64_t, bool>;
  std::vector<std::pair<std::string, Value>> fields;

  Record& add(std::string key, std::string v) {
    fields.emplace_back(std::move(key), std::move(v));
    return *this;
  }
  Record& add(std::string key, const char* v) {
    fields.emplace_back(std::move(key), std::string(v));
    return *this;
  }
  Record& add(std::string key, double v) {
    fields.emplace_back(std::move(key), v);
    return *this;
  }
  Record& add(std::string key, std::int64_t v) {
    fields.emplace_back(std::move(key), v);
    return *this;
  }
  Record& add(std::string key, int v) {
    fields.emplace_back(std::move(key), std::int64_t(v));
    return *this;
  }
  Record& add(std::string key, bool v) {
    fields.emplace_back(std::move(key), v);
    return *this;
  }
};

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string value_plain(const Record::Value& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  if (const auto* d = std::get_if<double>(&v)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  return std::get<bool>(v) ? "true" : "false";
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out += ch;
    }
  }
  return out;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    out += ch;
    if (ch == '"') out += '"';
  }
  out += '"';
  return out;
}

inline std::string value_json(const Record::Value& v) {
  if (const auto* s = std::get_if<std::string>(&v))
    return "\"" + json_escape(*s) + "\"";
  return value_plain(v);
}

}  // namespace detail

/// Emit records as CSV (header row from the schema, RFC-style quoting) or
/// JSON lines (one object per record). Output is byte-stable for identical
/// inputs. The schema is passed separately so an empty result still yields a
/// CSV header.
inline void emit_records(const std::vector<std::string>& schema,
                         const std::vector<Record>& records,
                         OutputFormat format, std::ostream& os) {
  if (format == OutputFormat::Csv) {
    for (std::size_t i = 0; i < schema.size(); ++i)
      os << (i ? "," : "") << detail::csv_escape(schema[i]);
    os << '\n';
    for (const Record& r : records) {
      if (r.fields.size() != schema.size())
        throw std::invalid_argument("emit_records: record does not match schema");
      for (std::size_t i = 0; i < r.fields.size(); ++i) {
        if (r.fields[i].first != schema[i])
          throw std::invalid_argument("emit_records: record does not match schema");
        os << (i ? "," : "")
           << detail::csv_escape(detail::value_plain(r.fields[i].second));
      }
      os << '\n';
    }
  } else {
    for (const Record& r : records) {
      os << '{';
      for (std::size_t i = 0; i < r.fields.size(); ++i) {
        os << (i ? "," : "") << "\"" << detail::json_escape(r.fields[i].first)
           << "\":" << detail::value_json(r.fields[i].second);
      }
      os << "}\n";
    }
  }
}

}  // namespace ricci
