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

// A small subset of TOML used by run configs and site profiles:
//
//   # comment
//   top_level = 1
//   [section]            # or [section.sub]
//   key = "basic string with \"escapes\""
//   key = 'literal string, backslashes kept: \d{5}'
//   key = 42 | 0.25 | true
//   key = [ 'a', 'b' ]   # single-line arrays
//
// Keys are unique per section. Nested tables, dates and multi-line values are
// not supported.

#ifndef PHICON_SRC_CONFIG_TEXT_HPP_
#define PHICON_SRC_CONFIG_TEXT_HPP_

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace phicon {

struct ConfigValue {
  using Array = std::vector<ConfigValue>;
  std::variant<bool, std::int64_t, double, std::string, Array> value;
  std::size_t line = 0;

  bool as_bool() const;
  std::int64_t as_int() const;
  double as_double() const;  // integers are accepted
  const std::string& as_string() const;
  const Array& as_array() const;
  std::vector<std::string> as_string_list() const;
  std::vector<double> as_double_list() const;
  std::vector<std::int64_t> as_int_list() const;
};

class ConfigDocument {
 public:
  using Section = std::map<std::string, ConfigValue, std::less<>>;

  static ConfigDocument parse(std::string_view text, std::string origin = "<config>");
  static ConfigDocument load(const std::filesystem::path& path);

  // "" is the top-level section.
  bool has_section(std::string_view name) const;
  const Section* section(std::string_view name) const;
  std::vector<std::string> section_names() const;

  const ConfigValue* find(std::string_view section, std::string_view key) const;

  // Throws kParse naming the first key of `section` not in `allowed`.
  void allow_keys(std::string_view section, std::initializer_list<std::string_view> allowed) const;

  const std::string& origin() const { return origin_; }

 private:
  std::string origin_;
  std::map<std::string, Section, std::less<>> sections_;
};

}  // namespace phicon

#endif  // PHICON_SRC_CONFIG_TEXT_HPP_
