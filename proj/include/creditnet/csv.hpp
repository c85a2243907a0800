#pragma once

// Minimal delimited-text helpers: one record per line, optional double-quote
// quoting with "" as the escaped quote. Embedded newlines are not supported.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace creditnet::csv {

// Returns nullopt on an unterminated quoted field.
inline std::optional<std::vector<std::string>> split(std::string_view line, char delim = ',') {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool field_started_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && cur.empty() && !field_started_quoted) {
      quoted = true;
      field_started_quoted = true;
    } else if (c == delim) {
      fields.push_back(std::move(cur));
      cur.clear();
      field_started_quoted = false;
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) return std::nullopt;
  fields.push_back(std::move(cur));
  return fields;
}

// Reads one line, stripping a trailing '\r'. Returns false at end of stream.
inline bool read_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

inline std::string quote(std::string_view field, char delim = ',') {
  if (field.find_first_of(std::string{delim} + "\"\n\r") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

// Shortest decimal text that round-trips the double. Non-finite values are
// written as "nan" / "inf" / "-inf".
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

class Writer {
 public:
  explicit Writer(std::ostream& out, char delim = ',') : out_(out), delim_(delim) {}

  Writer& row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << delim_;
      out_ << quote(fields[i], delim_);
    }
    out_ << '\n';
    return *this;
  }

 private:
  std::ostream& out_;
  char delim_;
};

}  // namespace creditnet::csv
