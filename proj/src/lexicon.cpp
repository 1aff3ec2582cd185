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

#include "lexicon.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "corpus.hpp"
#include "errors.hpp"

namespace phicon {

// ---------------------------------------------------------------------------
// Lexicon
// ---------------------------------------------------------------------------

Lexicon::Lexicon(std::string phi_type, std::vector<std::string> entries)
    : phi_type_(std::move(phi_type)), entries_(std::move(entries)) {
  index_.reserve(entries_.size());
  for (const auto& e : entries_) {
    if (e.empty()) fail(ErrorCode::kInvalidArgument, "empty lexicon entry for " + phi_type_);
    if (e.find_first_of("\t\r\n") != std::string::npos || e.front() == ' ' || e.back() == ' ' ||
        e.find("  ") != std::string::npos) {
      fail(ErrorCode::kInvalidArgument, "malformed lexicon entry '" + e + "' for " + phi_type_);
    }
    if (!index_.insert(e).second) {
      fail(ErrorCode::kInvalidArgument, "duplicate lexicon entry '" + e + "' for " + phi_type_);
    }
  }
}

bool Lexicon::contains(std::string_view entry) const {
  return index_.count(std::string(entry)) > 0;
}

std::string normalize_entry(std::string_view raw) {
  std::string out;
  bool pending_space = false;
  for (char c : raw) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

Lexicon parse_lexicon(std::string_view text, std::string phi_type) {
  std::vector<std::string> entries;
  std::unordered_set<std::string> seen;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    std::string entry = normalize_entry(line);
    if (entry.empty()) continue;
    if (seen.insert(entry).second) entries.push_back(std::move(entry));
  }
  if (entries.empty()) fail(ErrorCode::kDomain, "empty lexicon for " + phi_type);
  return Lexicon(std::move(phi_type), std::move(entries));
}

Lexicon load_lexicon(const std::filesystem::path& path, std::string phi_type) {
  std::string text = read_text_file(path);
  try {
    return parse_lexicon(text, std::move(phi_type));
  } catch (const Error& e) {
    fail(e.code(), path.string() + ": " + e.what());
  }
}

void write_lexicon(const std::filesystem::path& path, const Lexicon& lexicon) {
  std::string text;
  for (const auto& e : lexicon.entries()) {
    text += e;
    text += '\n';
  }
  write_text_file(path, text);
}

// ---------------------------------------------------------------------------
// Identifier templates
// ---------------------------------------------------------------------------

namespace {

constexpr const char* kMonthNames[] = {"January", "February", "March",     "April",
                                       "May",     "June",     "July",      "August",
                                       "September", "October", "November", "December"};

std::string regex_escape_class(const std::string& chars) {
  std::string out = "[";
  for (char c : chars) {
    if (c == '\\' || c == ']' || c == '[' || c == '^' || c == '-') out += '\\';
    out += c;
  }
  out += ']';
  return out;
}

std::string two_digits(unsigned v) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02u", v % 100);
  return buf;
}

}  // namespace

IdentifierPattern IdentifierPattern::parse(std::string_view source) {
  IdentifierPattern p;
  p.source_ = std::string(source);
  auto bad = [&](const std::string& what) -> void {
    fail(ErrorCode::kInvalidArgument, "pattern '" + p.source_ + "': " + what);
  };
  if (source.empty()) bad("empty pattern");

  std::size_t i = 0;
  while (i < source.size()) {
    char c = source[i];
    if (c == '\\') {
      if (i + 1 >= source.size()) bad("dangling backslash");
      char e = source[i + 1];
      p.elements_.push_back(CharRun{e == 'd' ? std::string("0123456789") : std::string(1, e)});
      i += 2;
    } else if (c == '[') {
      std::size_t close = source.find(']', i + 1);
      if (close == std::string_view::npos) bad("unterminated character class");
      std::string_view body = source.substr(i + 1, close - i - 1);
      if (body.empty() || body.front() == '^') bad("unsupported character class");
      std::string chars;
      for (std::size_t k = 0; k < body.size(); ++k) {
        if (k + 2 < body.size() && body[k + 1] == '-') {
          if (body[k + 2] < body[k]) bad("reversed range in character class");
          for (char x = body[k]; x <= body[k + 2]; ++x) chars += x;
          k += 2;
        } else {
          chars += body[k];
        }
      }
      std::sort(chars.begin(), chars.end());
      chars.erase(std::unique(chars.begin(), chars.end()), chars.end());
      p.elements_.push_back(CharRun{chars});
      i = close + 1;
    } else if (c == '{') {
      std::size_t close = source.find('}', i + 1);
      if (close == std::string_view::npos) bad("unterminated repetition");
      if (p.elements_.empty() || !std::holds_alternative<CharRun>(p.elements_.back())) {
        bad("repetition without a preceding character or class");
      }
      std::string body(source.substr(i + 1, close - i - 1));
      unsigned lo = 0;
      unsigned hi = 0;
      int consumed = 0;
      if (std::sscanf(body.c_str(), "%u,%u%n", &lo, &hi, &consumed) == 2 &&
          consumed == static_cast<int>(body.size())) {
      } else if (std::sscanf(body.c_str(), "%u%n", &lo, &consumed) == 1 &&
                 consumed == static_cast<int>(body.size())) {
        hi = lo;
      } else {
        bad("malformed repetition {" + body + "}");
      }
      if (lo == 0 || hi < lo || hi > 64) bad("repetition out of range {" + body + "}");
      auto& run = std::get<CharRun>(p.elements_.back());
      run.min = lo;
      run.max = hi;
      i = close + 1;
    } else if (c == '<') {
      std::size_t close = source.find('>', i + 1);
      if (close == std::string_view::npos) bad("unterminated date field");
      std::string_view name = source.substr(i + 1, close - i - 1);
      DateField f;
      if (name == "MM") f = DateField::kMM;
      else if (name == "DD") f = DateField::kDD;
      else if (name == "YYYY") f = DateField::kYYYY;
      else if (name == "M") f = DateField::kM;
      else if (name == "D") f = DateField::kD;
      else if (name == "YY") f = DateField::kYY;
      else if (name == "MonthName") f = DateField::kMonthName;
      else {
        bad("unknown date field <" + std::string(name) + ">");
        return p;
      }
      p.elements_.push_back(f);
      p.has_date_ = true;
      i = close + 1;
    } else {
      p.elements_.push_back(CharRun{std::string(1, c)});
      ++i;
    }
  }

  std::string re;
  for (const auto& el : p.elements_) {
    if (const auto* run = std::get_if<CharRun>(&el)) {
      re += regex_escape_class(run->chars);
      re += "{" + std::to_string(run->min) + "," + std::to_string(run->max) + "}";
      continue;
    }
    switch (std::get<DateField>(el)) {
      case DateField::kMM: re += "(0[1-9]|1[0-2])"; break;
      case DateField::kDD: re += "(0[1-9]|[12][0-9]|3[01])"; break;
      case DateField::kYYYY: re += "[0-9]{4}"; break;
      case DateField::kM: re += "([1-9]|1[0-2])"; break;
      case DateField::kD: re += "([1-9]|[12][0-9]|3[01])"; break;
      case DateField::kYY: re += "[0-9]{2}"; break;
      case DateField::kMonthName: {
        re += "(";
        for (int m = 0; m < 12; ++m) re += std::string(m ? "|" : "") + kMonthNames[m];
        re += ")";
        break;
      }
    }
  }
  p.regex_ = std::make_shared<const std::regex>(re, std::regex::ECMAScript | std::regex::optimize);
  return p;
}

std::string IdentifierPattern::sample(RandomStream& rng, YearRange years) const {
  using namespace std::chrono;
  year_month_day date{};
  if (has_date_) {
    if (years.last < years.first) fail(ErrorCode::kInvalidArgument, "empty year range");
    sys_days first{year{years.first} / January / 1};
    sys_days last{year{years.last} / December / 31};
    auto span = (last - first).count();
    date = year_month_day{first + days{rng.between(0, span)}};
  }
  std::string out;
  for (const auto& el : elements_) {
    if (const auto* run = std::get_if<CharRun>(&el)) {
      auto len = static_cast<unsigned>(rng.between(run->min, run->max));
      for (unsigned k = 0; k < len; ++k) out += run->chars[rng.below(run->chars.size())];
      continue;
    }
    auto m = static_cast<unsigned>(date.month());
    auto d = static_cast<unsigned>(date.day());
    int y = static_cast<int>(date.year());
    switch (std::get<DateField>(el)) {
      case DateField::kMM: out += two_digits(m); break;
      case DateField::kDD: out += two_digits(d); break;
      case DateField::kYYYY: out += std::to_string(y); break;
      case DateField::kM: out += std::to_string(m); break;
      case DateField::kD: out += std::to_string(d); break;
      case DateField::kYY: out += two_digits(static_cast<unsigned>(y % 100)); break;
      case DateField::kMonthName: out += kMonthNames[m - 1]; break;
    }
  }
  return out;
}

bool IdentifierPattern::matches(std::string_view text) const {
  return std::regex_match(text.begin(), text.end(), *regex_);
}

long double IdentifierPattern::space_size(YearRange years) const {
  long double size = 1.0L;
  for (const auto& el : elements_) {
    if (const auto* run = std::get_if<CharRun>(&el)) {
      long double sum = 0.0L;
      for (unsigned len = run->min; len <= run->max; ++len) {
        sum += std::pow(static_cast<long double>(run->chars.size()), static_cast<long double>(len));
      }
      size *= sum;
    }
  }
  if (has_date_) {
    using namespace std::chrono;
    sys_days first{year{years.first} / January / 1};
    sys_days last{year{years.last} / December / 31};
    size *= static_cast<long double>((last - first).count() + 1);
  }
  return size;
}

GeneratorSpec default_generator_spec(std::string_view phi_type) {
  GeneratorSpec spec;
  spec.phi_type = std::string(phi_type);
  if (phi_type == "Zip") {
    spec.patterns = {R"(\d{5})"};
  } else if (phi_type == "Phone") {
    spec.patterns = {R"((\d{3}) \d{3}-\d{4})", R"(\d{3}-\d{3}-\d{4})", R"(\d{3}.\d{3}.\d{4})"};
  } else if (phi_type == "Date") {
    spec.patterns = {"<MM>/<DD>/<YYYY>", "<YYYY>-<MM>-<DD>", "<M>/<D>/<YY>",
                     "<MonthName> <D>, <YYYY>"};
  } else if (phi_type == "ID") {
    spec.patterns = {R"([A-Z]{2}\d{6})", R"(\d{5,8})"};
  } else if (phi_type == "MedicalRecord") {
    spec.patterns = {R"(\d{7})", R"(\d{3}-\d{2}-\d{2})"};
  } else if (phi_type == "Username") {
    spec.patterns = {R"([a-z]{5,8}\d{2})"};
  } else {
    fail(ErrorCode::kInvalidArgument,
         "no identifier generator for PHI type '" + std::string(phi_type) + "'");
  }
  spec.weights.assign(spec.patterns.size(), 1.0);
  return spec;
}

std::size_t default_generated_count(std::string_view phi_type) {
  if (phi_type == "ID") return 20000;
  if (phi_type == "Date") return 32900;
  if (phi_type == "Username") return 3000;
  if (phi_type == "Phone") return 21000;
  if (phi_type == "Zip") return 4000;
  if (phi_type == "MedicalRecord") return 4900;
  fail(ErrorCode::kInvalidArgument,
       "no identifier generator for PHI type '" + std::string(phi_type) + "'");
}

namespace {

std::vector<IdentifierPattern> compile_spec(const GeneratorSpec& spec) {
  if (!taxonomy().is_generator_backed(spec.phi_type)) {
    fail(ErrorCode::kInvalidArgument, "PHI type '" + spec.phi_type + "' is not generator-backed");
  }
  if (spec.patterns.empty()) {
    fail(ErrorCode::kInvalidArgument, "generator spec for " + spec.phi_type + " has no patterns");
  }
  if (!spec.weights.empty()) {
    if (spec.weights.size() != spec.patterns.size()) {
      fail(ErrorCode::kInvalidArgument, "generator spec for " + spec.phi_type +
                                            ": weights and patterns differ in length");
    }
    for (double w : spec.weights) {
      if (!(w > 0.0) || !std::isfinite(w)) {
        fail(ErrorCode::kInvalidArgument,
             "generator spec for " + spec.phi_type + ": weights must be positive");
      }
    }
  }
  std::vector<IdentifierPattern> out;
  for (const auto& p : spec.patterns) out.push_back(IdentifierPattern::parse(p));
  return out;
}

}  // namespace

Lexicon generate_identifiers(const GeneratorSpec& spec, std::size_t count, std::uint64_t seed) {
  if (count == 0) fail(ErrorCode::kInvalidArgument, "identifier count must be at least 1");
  auto patterns = compile_spec(spec);
  std::vector<double> weights = spec.weights;
  if (weights.empty()) weights.assign(patterns.size(), 1.0);

  long double space = 0.0L;
  for (const auto& p : patterns) space += p.space_size(spec.years);
  if (space < static_cast<long double>(count)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.0Lf", space);
    fail(ErrorCode::kExhausted, "cannot generate " + std::to_string(count) + " distinct " +
                                    spec.phi_type + " values: template space holds at most " + buf);
  }

  RandomStream rng(seed);
  std::vector<std::string> entries;
  std::unordered_set<std::string> seen;
  entries.reserve(count);
  seen.reserve(count * 2);
  const std::size_t budget = 100 * count;
  for (std::size_t attempt = 0; entries.size() < count; ++attempt) {
    if (attempt >= budget) {
      fail(ErrorCode::kExhausted, "generated only " + std::to_string(entries.size()) + " of " +
                                      std::to_string(count) + " distinct " + spec.phi_type +
                                      " values within " + std::to_string(budget) + " draws");
    }
    std::string value = patterns[rng.weighted(weights)].sample(rng, spec.years);
    if (seen.insert(value).second) entries.push_back(std::move(value));
  }
  return Lexicon(spec.phi_type, std::move(entries));
}

bool spec_matches(const GeneratorSpec& spec, std::string_view entry) {
  for (const auto& p : spec.patterns) {
    if (IdentifierPattern::parse(p).matches(entry)) return true;
  }
  return false;
}

std::string sample_entity(const Lexicon& lexicon, RandomStream& rng,
                          std::optional<std::string_view> avoid) {
  if (lexicon.empty()) fail(ErrorCode::kInvalidArgument, "sampling from an empty lexicon");
  const auto& entries = lexicon.entries();
  const std::string* pick = &entries[rng.below(entries.size())];
  if (avoid && entries.size() >= 2 && *pick == *avoid) pick = &entries[rng.below(entries.size())];
  return *pick;
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

LexiconRegistry::LexiconRegistry(std::vector<Lexicon> lexicons) {
  const PhiTaxonomy& tax = taxonomy();
  for (auto& lex : lexicons) {
    if (!tax.is_fine(lex.phi_type())) {
      fail(ErrorCode::kInvalidArgument,
           "lexicon registered under non-fine type '" + lex.phi_type() + "'");
    }
    std::string type = lex.phi_type();
    if (by_fine_.count(type)) {
      fail(ErrorCode::kInvalidArgument, "two lexicons registered for " + type);
    }
    by_fine_.emplace(std::move(type), std::make_shared<const Lexicon>(std::move(lex)));
  }
  for (const auto& coarse : tax.coarse_types()) {
    std::vector<std::string> merged;
    std::unordered_set<std::string> seen;
    for (const auto& fine : tax.members(coarse)) {
      auto it = by_fine_.find(fine);
      if (it == by_fine_.end()) continue;
      for (const auto& e : it->second->entries()) {
        if (seen.insert(e).second) merged.push_back(e);
      }
    }
    if (!merged.empty()) {
      by_coarse_.emplace(coarse, std::make_shared<const Lexicon>(coarse, std::move(merged)));
    }
  }
}

std::shared_ptr<const Lexicon> LexiconRegistry::resolve(std::string_view label_type,
                                                        Granularity granularity) const {
  const PhiTaxonomy& tax = taxonomy();
  if (!tax.is_known(label_type)) {
    fail(ErrorCode::kResolution, "unknown PHI type '" + std::string(label_type) + "'");
  }
  bool as_coarse = tax.is_coarse(label_type) &&
                   (!tax.is_fine(label_type) || granularity == Granularity::kCoarse);
  if (as_coarse) {
    auto it = by_coarse_.find(label_type);
    if (it == by_coarse_.end()) {
      fail(ErrorCode::kResolution, "no lexicon registered for any member of category '" +
                                       std::string(label_type) + "'");
    }
    return it->second;
  }
  auto it = by_fine_.find(label_type);
  if (it == by_fine_.end()) {
    fail(ErrorCode::kResolution, "no lexicon registered for '" + std::string(label_type) + "'");
  }
  return it->second;
}

const Lexicon* LexiconRegistry::find(std::string_view fine_type) const {
  auto it = by_fine_.find(fine_type);
  return it == by_fine_.end() ? nullptr : it->second.get();
}

std::vector<std::string> LexiconRegistry::types() const {
  std::vector<std::string> out;
  for (const auto& [t, _] : by_fine_) out.push_back(t);
  return out;
}

std::vector<Lexicon> load_lexicon_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    fail(ErrorCode::kIo, "lexicon directory '" + dir.string() + "' does not exist");
  }
  std::vector<Lexicon> out;
  for (const auto& fine : taxonomy().fine_types()) {
    auto path = dir / (fine + ".txt");
    if (std::filesystem::exists(path)) out.push_back(load_lexicon(path, fine));
  }
  return out;
}

}  // namespace phicon
