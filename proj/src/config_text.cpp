// Copyright 2026 The Phicon Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "config_text.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "corpus.hpp"
#include "errors.hpp"

namespace phicon {

namespace {

const char* type_name(const ConfigValue& v) {
  switch (v.value.index()) {
    case 0: return "boolean";
    case 1: return "integer";
    case 2: return "float";
    case 3: return "string";
    default: return "array";
  }
}

[[noreturn]] void type_fail(const ConfigValue& v, const char* wanted) {
  fail(ErrorCode::kParse, "line " + std::to_string(v.line) + ": expected " + wanted + ", got " +
                              type_name(v));
}

class LineParser {
 public:
  LineParser(std::string_view text, std::size_t line, const std::string& origin)
      : text_(text), line_(line), origin_(origin) {}

  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::kParse, origin_ + ":" + std::to_string(line_) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  bool at_end_or_comment() {
    skip_ws();
    return pos_ >= text_.size() || text_[pos_] == '#';
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  ConfigValue value() {
    skip_ws();
    ConfigValue v;
    v.line = line_;
    char c = peek();
    if (c == '"') {
      v.value = basic_string();
    } else if (c == '\'') {
      v.value = literal_string();
    } else if (c == '[') {
      ++pos_;
      ConfigValue::Array items;
      skip_ws();
      if (peek() == ']') {
        ++pos_;
      } else {
        for (;;) {
          items.push_back(value());
          skip_ws();
          if (peek() == ',') {
            ++pos_;
            skip_ws();
            if (peek() == ']') {  // trailing comma
              ++pos_;
              break;
            }
            continue;
          }
          if (peek() == ']') {
            ++pos_;
            break;
          }
          error("expected ',' or ']' in array");
        }
      }
      v.value = std::move(items);
    } else {
      std::size_t start = pos_;
      while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ']' &&
             text_[pos_] != '#' && text_[pos_] != ' ' && text_[pos_] != '\t') {
        ++pos_;
      }
      std::string_view word = text_.substr(start, pos_ - start);
      if (word.empty()) error("missing value");
      if (word == "true") {
        v.value = true;
      } else if (word == "false") {
        v.value = false;
      } else {
        std::string cleaned;
        std::remove_copy(word.begin(), word.end(), std::back_inserter(cleaned), '_');
        std::int64_t i = 0;
        auto [p, ec] = std::from_chars(cleaned.data(), cleaned.data() + cleaned.size(), i);
        if (ec == std::errc() && p == cleaned.data() + cleaned.size()) {
          v.value = i;
        } else {
          double d = 0;
          auto [q, ec2] = std::from_chars(cleaned.data(), cleaned.data() + cleaned.size(), d);
          if (ec2 != std::errc() || q != cleaned.data() + cleaned.size()) {
            error("cannot parse value '" + std::string(word) + "'");
          }
          v.value = d;
        }
      }
    }
    return v;
  }

  std::string basic_string() {
    ++pos_;
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      char c = text_[pos_++];
      if (c != '\\') {
        out += c;
        continue;
      }
      if (pos_ >= text_.size()) break;
      char e = text_[pos_++];
      switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case '\\': out += '\\'; break;
        case '"': out += '"'; break;
        default: error(std::string("unknown escape '\\") + e + "' (use a 'literal string')");
      }
    }
    if (pos_ >= text_.size()) error("unterminated string");
    ++pos_;
    return out;
  }

  std::string literal_string() {
    ++pos_;
    std::size_t end = text_.find('\'', pos_);
    if (end == std::string_view::npos) error("unterminated string");
    std::string out(text_.substr(pos_, end - pos_));
    pos_ = end + 1;
    return out;
  }

  std::string key() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
            text_[pos_] == '-')) {
      ++pos_;
    }
    if (start == pos_) error("expected a key");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::size_t pos_ = 0;

 private:
  std::string_view text_;
  std::size_t line_;
  const std::string& origin_;
};

}  // namespace

bool ConfigValue::as_bool() const {
  if (auto* b = std::get_if<bool>(&value)) return *b;
  type_fail(*this, "boolean");
}

std::int64_t ConfigValue::as_int() const {
  if (auto* i = std::get_if<std::int64_t>(&value)) return *i;
  type_fail(*this, "integer");
}

double ConfigValue::as_double() const {
  if (auto* d = std::get_if<double>(&value)) return *d;
  if (auto* i = std::get_if<std::int64_t>(&value)) return static_cast<double>(*i);
  type_fail(*this, "number");
}

const std::string& ConfigValue::as_string() const {
  if (auto* s = std::get_if<std::string>(&value)) return *s;
  type_fail(*this, "string");
}

const ConfigValue::Array& ConfigValue::as_array() const {
  if (auto* a = std::get_if<Array>(&value)) return *a;
  type_fail(*this, "array");
}

std::vector<std::string> ConfigValue::as_string_list() const {
  std::vector<std::string> out;
  for (const auto& v : as_array()) out.push_back(v.as_string());
  return out;
}

std::vector<double> ConfigValue::as_double_list() const {
  std::vector<double> out;
  for (const auto& v : as_array()) out.push_back(v.as_double());
  return out;
}

std::vector<std::int64_t> ConfigValue::as_int_list() const {
  std::vector<std::int64_t> out;
  for (const auto& v : as_array()) out.push_back(v.as_int());
  return out;
}

ConfigDocument ConfigDocument::parse(std::string_view text, std::string origin) {
  ConfigDocument doc;
  doc.origin_ = std::move(origin);
  doc.sections_[""];
  std::string current;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    LineParser p(line, line_no, doc.origin_);
    if (p.at_end_or_comment()) continue;
    if (p.peek() == '[') {
      std::size_t close = line.find(']', p.pos_);
      if (close == std::string_view::npos) p.error("unterminated section header");
      std::string name(line.substr(p.pos_ + 1, close - p.pos_ - 1));
      name.erase(0, name.find_first_not_of(" \t"));
      name.erase(name.find_last_not_of(" \t") + 1);
      if (name.empty()) p.error("empty section name");
      if (doc.sections_.count(name) && name != current) p.error("duplicate section [" + name + "]");
      doc.sections_[name];
      current = name;
      p.pos_ = close + 1;
      if (!p.at_end_or_comment()) p.error("trailing characters after section header");
      continue;
    }
    std::string key = p.key();
    p.skip_ws();
    if (p.peek() != '=') p.error("expected '=' after key '" + key + "'");
    ++p.pos_;
    ConfigValue v = p.value();
    if (!p.at_end_or_comment()) p.error("trailing characters after value");
    auto& section = doc.sections_[current];
    if (section.count(key)) p.error("duplicate key '" + key + "'");
    section.emplace(std::move(key), std::move(v));
  }
  return doc;
}

ConfigDocument ConfigDocument::load(const std::filesystem::path& path) {
  return parse(read_text_file(path), path.string());
}

bool ConfigDocument::has_section(std::string_view name) const {
  return sections_.find(name) != sections_.end();
}

const ConfigDocument::Section* ConfigDocument::section(std::string_view name) const {
  auto it = sections_.find(name);
  return it == sections_.end() ? nullptr : &it->second;
}

std::vector<std::string> ConfigDocument::section_names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : sections_) out.push_back(name);
  return out;
}

const ConfigValue* ConfigDocument::find(std::string_view section, std::string_view key) const {
  const Section* s = this->section(section);
  if (!s) return nullptr;
  auto it = s->find(key);
  return it == s->end() ? nullptr : &it->second;
}

void ConfigDocument::allow_keys(std::string_view section,
                                std::initializer_list<std::string_view> allowed) const {
  const Section* s = this->section(section);
  if (!s) return;
  for (const auto& [key, v] : *s) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      std::string where = section.empty() ? std::string("top level") : "[" + std::string(section) + "]";
      fail(ErrorCode::kParse, origin_ + ":" + std::to_string(v.line) + ": unknown key '" + key +
                                  "' in " + where);
    }
  }
}

}  // namespace phicon
