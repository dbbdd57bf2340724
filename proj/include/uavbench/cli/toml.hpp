// Copyright 2026 The uavbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Reader for the TOML subset used by run configs: [table] headers,
// `key = value` lines, '#' comments, and values that are basic strings,
// integers, floats, booleans or (possibly multi-line) arrays of those.
// Dotted keys, inline tables, dates and literal strings are not supported
// and are reported as errors.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "uavbench/core/error.hpp"
#include "uavbench/core/text.hpp"

namespace uavbench::toml {

struct Value;
using Array = std::vector<Value>;

struct Value {
  std::variant<bool, std::int64_t, double, std::string, Array> v;

  bool is_int() const { return std::holds_alternative<std::int64_t>(v); }

  std::int64_t as_int(const std::string& key) const {
    if (auto p = std::get_if<std::int64_t>(&v)) return *p;
    throw InvalidArgument("config key '" + key + "' must be an integer");
  }
  double as_double(const std::string& key) const {
    if (auto p = std::get_if<double>(&v)) return *p;
    if (auto p = std::get_if<std::int64_t>(&v)) return static_cast<double>(*p);
    throw InvalidArgument("config key '" + key + "' must be a number");
  }
  bool as_bool(const std::string& key) const {
    if (auto p = std::get_if<bool>(&v)) return *p;
    throw InvalidArgument("config key '" + key + "' must be true or false");
  }
  const std::string& as_string(const std::string& key) const {
    if (auto p = std::get_if<std::string>(&v)) return *p;
    throw InvalidArgument("config key '" + key + "' must be a string");
  }
  const Array& as_array(const std::string& key) const {
    if (auto p = std::get_if<Array>(&v)) return *p;
    throw InvalidArgument("config key '" + key + "' must be an array");
  }
};

/// section -> key -> value; top-level keys live in section "".
using Document = std::map<std::string, std::map<std::string, Value>>;

namespace detail {

class Parser {
 public:
  Parser(std::string src) : s_(std::move(src)) {}

  Document parse() {
    Document doc;
    std::string section;
    doc[section];
    while (true) {
      skip_blank_lines();
      if (at_end()) break;
      if (peek() == '[') {
        ++i_;
        const auto close = s_.find(']', i_);
        if (close == std::string::npos) fail("unterminated table header");
        section = std::string(text::trim(std::string_view(s_).substr(i_, close - i_)));
        if (!valid_key(section)) fail("bad table name '" + section + "'");
        if (doc.count(section) && !doc[section].empty()) fail("table [" + section + "] defined twice");
        doc[section];
        i_ = close + 1;
        end_of_line();
        continue;
      }
      const auto eq = s_.find('=', i_);
      const auto nl = s_.find('\n', i_);
      if (eq == std::string::npos || (nl != std::string::npos && eq > nl)) fail("expected key = value");
      const std::string key(text::trim(std::string_view(s_).substr(i_, eq - i_)));
      if (!valid_key(key)) fail("bad key '" + key + "'");
      i_ = eq + 1;
      skip_space();
      Value val = value();
      if (doc[section].count(key)) fail("key '" + key + "' defined twice");
      doc[section][key] = std::move(val);
      end_of_line();
    }
    return doc;
  }

 private:
  bool at_end() const { return i_ >= s_.size(); }
  char peek() const { return s_[i_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    std::size_t line = 1;
    for (std::size_t k = 0; k < std::min(i_, s_.size()); ++k) line += s_[k] == '\n';
    throw InvalidArgument("config line " + std::to_string(line) + ": " + msg);
  }

  static bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k) {
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
    }
    return true;
  }

  void skip_space() {
    while (!at_end() && (peek() == ' ' || peek() == '\t')) ++i_;
  }

  void skip_comment() {
    if (!at_end() && peek() == '#') {
      while (!at_end() && peek() != '\n') ++i_;
    }
  }

  void skip_blank_lines() {
    while (true) {
      skip_space();
      skip_comment();
      if (!at_end() && (peek() == '\n' || peek() == '\r')) {
        ++i_;
        continue;
      }
      return;
    }
  }

  void end_of_line() {
    skip_space();
    skip_comment();
    if (!at_end() && peek() == '\r') ++i_;
    if (!at_end() && peek() != '\n') fail("unexpected text after value");
    if (!at_end()) ++i_;
  }

  Value value() {
    if (at_end()) fail("missing value");
    const char c = peek();
    if (c == '"') return {string()};
    if (c == '[') return {array()};
    std::size_t j = i_;
    while (j < s_.size() && s_[j] != ',' && s_[j] != ']' && s_[j] != '#' && s_[j] != '\n' && s_[j] != '\r') ++j;
    const std::string tok(text::trim(std::string_view(s_).substr(i_, j - i_)));
    i_ = j;
    if (tok == "true") return {true};
    if (tok == "false") return {false};
    std::string digits;
    for (char ch : tok) {
      if (ch != '_') digits += ch;
    }
    if (digits.empty()) fail("missing value");
    const bool is_float = digits.find_first_of(".eE") != std::string::npos || digits == "inf" || digits == "nan";
    try {
      if (is_float) return {text::parse_double(digits)};
      return {static_cast<std::int64_t>(text::parse_int(digits.front() == '+' ? digits.substr(1) : digits))};
    } catch (const Error&) {
      fail("cannot parse value '" + tok + "'");
    }
  }

  std::string string() {
    ++i_;  // opening quote
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') fail("unterminated string");
      const char c = s_[i_++];
      if (c == '"') return out;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (at_end()) fail("unterminated escape");
      const char e = s_[i_++];
      switch (e) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        default: fail(std::string("unsupported escape \\") + e);
      }
    }
  }

  Array array() {
    ++i_;  // [
    Array out;
    while (true) {
      skip_blank_lines();
      if (at_end()) fail("unterminated array");
      if (peek() == ']') {
        ++i_;
        return out;
      }
      out.push_back(value());
      skip_blank_lines();
      if (at_end()) fail("unterminated array");
      if (peek() == ',') {
        ++i_;
      } else if (peek() != ']') {
        fail("expected ',' or ']' in array");
      }
    }
  }

  std::string s_;
  std::size_t i_ = 0;
};

}  // namespace detail

inline Document parse(std::string src) { return detail::Parser(std::move(src)).parse(); }

inline Document parse(std::istream& is) {
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse(ss.str());
}

}  // namespace uavbench::toml
