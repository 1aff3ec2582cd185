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

// Candidate-entity pools used to replace PHI spans.

#ifndef PHICON_SRC_LEXICON_HPP_
#define PHICON_SRC_LEXICON_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include "rng.hpp"

namespace phicon {

// An ordered, duplicate-free list of replacement surfaces for one PHI type.
// Multi-token entries are joined by single spaces.
class Lexicon {
 public:
  Lexicon(std::string phi_type, std::vector<std::string> entries);

  const std::string& phi_type() const { return phi_type_; }
  const std::vector<std::string>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool contains(std::string_view entry) const;

  friend bool operator==(const Lexicon& a, const Lexicon& b) {
    return a.phi_type_ == b.phi_type_ && a.entries_ == b.entries_;
  }

 private:
  std::string phi_type_;
  std::vector<std::string> entries_;
  std::unordered_set<std::string> index_;
};

// Trims and collapses whitespace runs to single spaces.
std::string normalize_entry(std::string_view raw);

// One entry per line; blank lines skipped, duplicates dropped (first wins).
Lexicon parse_lexicon(std::string_view text, std::string phi_type);
Lexicon load_lexicon(const std::filesystem::path& path, std::string phi_type);
void write_lexicon(const std::filesystem::path& path, const Lexicon& lexicon);

// ---------------------------------------------------------------------------
// Identifier templates
// ---------------------------------------------------------------------------
//
// A template is a sequence of:
//   \d            one digit               [A-Z0-9]   a character class
//   {n} / {m,n}   repeat the previous digit, class or literal character
//   <MM> <DD> <YYYY> <M> <D> <YY> <MonthName>
//                 fields of one calendar date drawn per sample
//   \x            the literal character x
// Every other character is literal, including '(', ')' and '.'.

struct YearRange {
  int first = 1950;
  int last = 2020;
};

class IdentifierPattern {
 public:
  static IdentifierPattern parse(std::string_view source);

  const std::string& source() const { return source_; }
  bool has_date() const { return has_date_; }

  std::string sample(RandomStream& rng, YearRange years) const;
  bool matches(std::string_view text) const;

  // Upper bound on the number of distinct strings the template can produce.
  long double space_size(YearRange years) const;

 private:
  enum class DateField { kMM, kDD, kYYYY, kM, kD, kYY, kMonthName };
  struct CharRun {
    std::string chars;
    unsigned min = 1;
    unsigned max = 1;
  };
  using Element = std::variant<CharRun, DateField>;

  std::string source_;
  std::vector<Element> elements_;
  bool has_date_ = false;
  std::shared_ptr<const std::regex> regex_;
};

struct GeneratorSpec {
  std::string phi_type;
  std::vector<std::string> patterns;
  std::vector<double> weights;  // empty means equal weights
  YearRange years;
};

GeneratorSpec default_generator_spec(std::string_view phi_type);
std::size_t default_generated_count(std::string_view phi_type);

// `count` distinct entries drawn by rejection sampling; throws kExhausted
// when the template space cannot hold `count` values or when 100 * count
// draws did not produce enough distinct ones.
Lexicon generate_identifiers(const GeneratorSpec& spec, std::size_t count, std::uint64_t seed);

bool spec_matches(const GeneratorSpec& spec, std::string_view entry);

// Uniform draw; when `avoid` equals the draw and the lexicon has at least two
// entries, draws once more and returns that second draw.
std::string sample_entity(const Lexicon& lexicon, RandomStream& rng,
                          std::optional<std::string_view> avoid = std::nullopt);

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

// How to read a label type that names both a fine type and a category ("ID").
enum class Granularity { kFine, kCoarse };

class LexiconRegistry {
 public:
  LexiconRegistry() = default;
  explicit LexiconRegistry(std::vector<Lexicon> lexicons);

  // Fine type -> its lexicon (the registered object itself). Coarse category ->
  // deduplicated union of the registered member lexicons in category order.
  // Throws kResolution for unknown types or when nothing is registered.
  std::shared_ptr<const Lexicon> resolve(std::string_view label_type,
                                         Granularity granularity = Granularity::kFine) const;

  const Lexicon* find(std::string_view fine_type) const;
  std::vector<std::string> types() const;
  std::size_t size() const { return by_fine_.size(); }

 private:
  std::map<std::string, std::shared_ptr<const Lexicon>, std::less<>> by_fine_;
  std::map<std::string, std::shared_ptr<const Lexicon>, std::less<>> by_coarse_;
};

// Loads every "<FineType>.txt" present in `dir`.
std::vector<Lexicon> load_lexicon_dir(const std::filesystem::path& dir);

}  // namespace phicon

#endif  // PHICON_SRC_LEXICON_HPP_
