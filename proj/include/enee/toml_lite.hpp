#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "enee/errors.hpp"

namespace enee {

/// Minimal TOML reader covering the flat configuration files this project
/// uses: top-level and [table] sections, bare keys, booleans, integers,
/// floats, basic strings, single-line arrays of scalars, and # comments.
/// Nested tables, dates and multi-line values are out of scope.
namespace toml {

struct Value;
using Array = std::vector<Value>;

struct Value {
  std::variant<bool, std::int64_t, double, std::string, Array> data;

  bool is_array() const { return std::holds_alternative<Array>(data); }

  bool as_bool(const std::string& key) const {
    if (auto* v = std::get_if<bool>(&data)) return *v;
    throw InvalidConfig("key '" + key + "' must be a boolean");
  }
  std::int64_t as_int(const std::string& key) const {
    if (auto* v = std::get_if<std::int64_t>(&data)) return *v;
    throw InvalidConfig("key '" + key + "' must be an integer");
  }
  double as_double(const std::string& key) const {
    if (auto* v = std::get_if<double>(&data)) return *v;
    if (auto* v = std::get_if<std::int64_t>(&data)) return static_cast<double>(*v);
    throw InvalidConfig("key '" + key + "' must be a number");
  }
  const std::string& as_string(const std::string& key) const {
    if (auto* v = std::get_if<std::string>(&data)) return *v;
    throw InvalidConfig("key '" + key + "' must be a string");
  }
  const Array& as_array(const std::string& key) const {
    if (auto* v = std::get_if<Array>(&data)) return *v;
    throw InvalidConfig("key '" + key + "' must be an array");
  }
  std::vector<double> as_double_array(const std::string& key) const {
    std::vector<double> out;
    for (const Value& v : as_array(key)) out.push_back(v.as_double(key));
    return out;
  }
  std::vector<std::int64_t> as_int_array(const std::string& key) const {
    std::vector<std::int64_t> out;
    for (const Value& v : as_array(key)) out.push_back(v.as_int(key));
    return out;
  }
};

/// Keys inside a [section] are stored as "section.key".
using Table = std::map<std::string, Value>;

namespace detail {

inline void skip_ws(const std::string& s, std::size_t& i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

inline std::string parse_error(int line, const std::string& what) {
  return "TOML line " + std::to_string(line) + ": " + what;
}

inline Value parse_scalar(const std::string& raw, int line) {
  if (raw == "true") return Value{true};
  if (raw == "false") return Value{false};
  if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
    std::string out;
    for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
      if (raw[i] == '\\' && i + 2 < raw.size()) {
        ++i;
        switch (raw[i]) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default:
            throw InvalidConfig(parse_error(line, "unsupported escape"));
        }
      } else {
        out += raw[i];
      }
    }
    return Value{out};
  }
  const bool looks_float = raw.find_first_of(".eE") != std::string::npos &&
                           raw.find_first_not_of("+-0123456789.eE") == std::string::npos;
  if (!looks_float) {
    std::int64_t iv{};
    auto res = std::from_chars(raw.data(), raw.data() + raw.size(), iv);
    if (res.ec == std::errc{} && res.ptr == raw.data() + raw.size())
      return Value{iv};
  }
  double dv{};
  auto res = std::from_chars(raw.data(), raw.data() + raw.size(), dv);
  if (res.ec == std::errc{} && res.ptr == raw.data() + raw.size())
    return Value{dv};
  throw InvalidConfig(parse_error(line, "cannot parse value '" + raw + "'"));
}

inline std::string take_token(const std::string& s, std::size_t& i, int line) {
  skip_ws(s, i);
  if (i >= s.size()) throw InvalidConfig(parse_error(line, "unexpected end of line"));
  std::size_t start = i;
  if (s[i] == '"') {
    ++i;
    while (i < s.size() && s[i] != '"') {
      if (s[i] == '\\') ++i;
      ++i;
    }
    if (i >= s.size()) throw InvalidConfig(parse_error(line, "unterminated string"));
    ++i;
  } else {
    while (i < s.size() && s[i] != ',' && s[i] != ']' && s[i] != '#' &&
           s[i] != ' ' && s[i] != '\t')
      ++i;
  }
  return s.substr(start, i - start);
}

inline Value parse_value(const std::string& s, std::size_t& i, int line) {
  skip_ws(s, i);
  if (i < s.size() && s[i] == '[') {
    ++i;
    Array arr;
    for (;;) {
      skip_ws(s, i);
      if (i >= s.size()) throw InvalidConfig(parse_error(line, "unterminated array"));
      if (s[i] == ']') {
        ++i;
        break;
      }
      arr.push_back(parse_scalar(take_token(s, i, line), line));
      skip_ws(s, i);
      if (i < s.size() && s[i] == ',') ++i;
    }
    return Value{arr};
  }
  return parse_scalar(take_token(s, i, line), line);
}

}  // namespace detail

inline Table parse(std::istream& in) {
  Table table;
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t i = 0;
    detail::skip_ws(line, i);
    if (i >= line.size() || line[i] == '#') continue;
    if (line[i] == '[') {
      const std::size_t close = line.find(']', i);
      if (close == std::string::npos)
        throw InvalidConfig(detail::parse_error(lineno, "unterminated section header"));
      section = line.substr(i + 1, close - i - 1);
      if (section.empty())
        throw InvalidConfig(detail::parse_error(lineno, "empty section name"));
      continue;
    }
    std::size_t key_start = i;
    while (i < line.size() &&
           (std::isalnum(static_cast<unsigned char>(line[i])) || line[i] == '_' ||
            line[i] == '-'))
      ++i;
    const std::string key = line.substr(key_start, i - key_start);
    if (key.empty())
      throw InvalidConfig(detail::parse_error(lineno, "expected a key"));
    detail::skip_ws(line, i);
    if (i >= line.size() || line[i] != '=')
      throw InvalidConfig(detail::parse_error(lineno, "expected '=' after key '" + key + "'"));
    ++i;
    Value value = detail::parse_value(line, i, lineno);
    detail::skip_ws(line, i);
    if (i < line.size() && line[i] != '#')
      throw InvalidConfig(detail::parse_error(lineno, "trailing characters after value"));
    const std::string full_key = section.empty() ? key : section + "." + key;
    if (table.count(full_key))
      throw InvalidConfig(detail::parse_error(lineno, "duplicate key '" + full_key + "'"));
    table.emplace(full_key, std::move(value));
  }
  return table;
}

inline Table parse_string(const std::string& text) {
  std::istringstream iss(text);
  return parse(iss);
}

inline Table parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  return parse(in);
}

}  // namespace toml
}  // namespace enee
