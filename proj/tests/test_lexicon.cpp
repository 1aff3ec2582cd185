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


#include <chrono>
#include <map>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "doctest.h"
#include "errors.hpp"
#include "lexicon.hpp"
#include "support.hpp"

namespace phicon {
namespace {

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kInvalidArgument;
}

// Shapes of the default generator patterns, restated as ECMAScript regexes.
const std::map<std::string, std::vector<std::string>>& shape_oracle() {
  static const std::map<std::string, std::vector<std::string>> kShapes = {
      {"Zip", {R"(\d{5})"}},
      {"Phone", {R"(\(\d{3}\) \d{3}-\d{4})", R"(\d{3}-\d{3}-\d{4})", R"(\d{3}\.\d{3}\.\d{4})"}},
      {"ID", {R"([A-Z]{2}\d{6})", R"(\d{5,8})"}},
      {"MedicalRecord", {R"(\d{7})", R"(\d{3}-\d{2}-\d{2})"}},
      {"Username", {R"([a-z]{5,8}\d{2})"}},
  };
  return kShapes;
}

bool valid_calendar(int y, unsigned m, unsigned d) {
  return std::chrono::year_month_day{std::chrono::year{y}, std::chrono::month{m},
                                     std::chrono::day{d}}
      .ok();
}

// Parses the four default date shapes by hand and checks the calendar.
bool date_oracle(const std::string& s, int y_first, int y_last) {
  static const char* kMonths[] = {"January", "February", "March",     "April",   "May",      "June",
                                  "July",    "August",   "September", "October", "November", "December"};
  std::smatch m;
  int y = 0;
  unsigned mo = 0, d = 0;
  if (std::regex_match(s, m, std::regex(R"((\d{2})/(\d{2})/(\d{4}))"))) {
    mo = std::stoi(m[1]);
    d = std::stoi(m[2]);
    y = std::stoi(m[3]);
  } else if (std::regex_match(s, m, std::regex(R"((\d{4})-(\d{2})-(\d{2}))"))) {
    y = std::stoi(m[1]);
    mo = std::stoi(m[2]);
    d = std::stoi(m[3]);
  } else if (std::regex_match(s, m, std::regex(R"(([1-9]\d?)/([1-9]\d?)/(\d{2}))"))) {
    mo = std::stoi(m[1]);
    d = std::stoi(m[2]);
    // Two-digit years are only checked for a plausible day of month.
    return mo >= 1 && mo <= 12 && d >= 1 && d <= 31;
  } else if (std::regex_match(s, m, std::regex(R"(([A-Za-z]+) ([1-9]\d?), (\d{4}))"))) {
    for (unsigned k = 0; k < 12; ++k)
      if (m[1] == kMonths[k]) mo = k + 1;
    if (mo == 0) return false;
    d = std::stoi(m[2]);
    y = std::stoi(m[3]);
  } else {
    return false;
  }
  return y >= y_first && y <= y_last && valid_calendar(y, mo, d);
}

bool shape_matches(const std::string& type, const std::string& entry) {
  if (type == "Date") return date_oracle(entry, 1950, 2020);
  for (const auto& re : shape_oracle().at(type)) {
    if (std::regex_match(entry, std::regex(re))) return true;
  }
  return false;
}

TEST_CASE("load_lexicon trims, deduplicates and rejects empty files") {
  testing::TempDir dir("lexicon");
  write_text_file(dir.path() / "Patient.txt", "William\n  Alaska Health Center \nWilliam\n\n");
  Lexicon lex = load_lexicon(dir.path() / "Patient.txt", "Patient");
  CHECK(lex.size() == 2);
  CHECK(lex.entries() == std::vector<std::string>{"William", "Alaska Health Center"});
  CHECK(lex.contains("Alaska Health Center"));
  write_text_file(dir.path() / "blank.txt", "\n   \n\n");
  CHECK(code_of([&] { load_lexicon(dir.path() / "blank.txt", "Patient"); }) == ErrorCode::kDomain);
  CHECK(code_of([&] { load_lexicon(dir.path() / "nope.txt", "Patient"); }) == ErrorCode::kIo);
}

TEST_CASE("large curated lists keep their size") {
  std::string text;
  for (int i = 0; i < 5400; ++i) text += "Hospital Number " + std::to_string(i) + "\n";
  CHECK(parse_lexicon(text, "Hospital").size() == 5400);
}

TEST_CASE("default generators produce distinct entries of the declared shapes") {
  for (const auto& type : taxonomy().generator_backed()) {
    CAPTURE(type);
    GeneratorSpec spec = default_generator_spec(type);
    Lexicon lex = generate_identifiers(spec, 500, 17);
    CHECK(lex.size() == 500);
    std::set<std::string> unique(lex.entries().begin(), lex.entries().end());
    CHECK(unique.size() == 500);
    for (const auto& e : lex.entries()) {
      CAPTURE(e);
      CHECK(shape_matches(type, e));
      CHECK(spec_matches(spec, e));
    }
    CHECK(generate_identifiers(spec, 500, 17) == lex);
    CHECK(!(generate_identifiers(spec, 500, 18) == lex));
  }
}

TEST_CASE("zip generation hits the table size and exhausts past the space") {
  GeneratorSpec zip = default_generator_spec("Zip");
  Lexicon lex = generate_identifiers(zip, 4000, 1);
  CHECK(lex.size() == 4000);
  Lexicon one = generate_identifiers(zip, 1, 1);
  REQUIRE(one.size() == 1);
  CHECK(shape_matches("Zip", one.entries()[0]));
  CHECK(code_of([&] { generate_identifiers(zip, 100001, 1); }) == ErrorCode::kExhausted);
  CHECK(code_of([&] { generate_identifiers(zip, 0, 1); }) == ErrorCode::kInvalidArgument);
  CHECK(IdentifierPattern::parse(R"(\d{5})").space_size({}) == 100000.0L);
}

TEST_CASE("default generated counts mirror the list table") {
  CHECK(default_generated_count("ID") == 20000);
  CHECK(default_generated_count("Date") == 32900);
  CHECK(default_generated_count("Username") == 3000);
  CHECK(default_generated_count("Phone") == 21000);
  CHECK(default_generated_count("Zip") == 4000);
  CHECK(default_generated_count("MedicalRecord") == 4900);
}

TEST_CASE("generator specs are validated") {
  GeneratorSpec bad = default_generator_spec("Zip");
  bad.phi_type = "Doctor";
  CHECK(code_of([&] { generate_identifiers(bad, 10, 1); }) == ErrorCode::kInvalidArgument);
  GeneratorSpec empty{"Zip", {}, {}, {}};
  CHECK(code_of([&] { generate_identifiers(empty, 10, 1); }) == ErrorCode::kInvalidArgument);
  GeneratorSpec weights = default_generator_spec("Phone");
  weights.weights = {1.0, 0.0, 1.0};
  CHECK(code_of([&] { generate_identifiers(weights, 10, 1); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { IdentifierPattern::parse("<Month>"); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("pattern weights steer the mix") {
  GeneratorSpec spec = default_generator_spec("Phone");
  spec.weights = {8.0, 1.0, 1.0};
  Lexicon lex = generate_identifiers(spec, 3000, 2);
  int paren = 0;
  for (const auto& e : lex.entries()) paren += e.front() == '(';
  CHECK(paren == doctest::Approx(2400).epsilon(0.08));
}

TEST_CASE("year ranges bound generated dates") {
  GeneratorSpec spec = default_generator_spec("Date");
  spec.patterns = {"<YYYY>-<MM>-<DD>"};
  spec.weights = {1.0};
  spec.years = {2001, 2002};
  Lexicon lex = generate_identifiers(spec, 700, 3);
  for (const auto& e : lex.entries()) CHECK(date_oracle(e, 2001, 2002));
  CHECK(code_of([&] { generate_identifiers(spec, 731, 3); }) == ErrorCode::kExhausted);
}

TEST_CASE("sample_entity is uniform and avoids one repeat") {
  RandomStream r0(1);
  Lexicon single("Patient", {"William"});
  for (int i = 0; i < 10; ++i) CHECK(sample_entity(single, r0, "William") == "William");

  Lexicon pair("Patient", {"Ann", "Bo"});
  RandomStream a(5), b(5);
  for (int i = 0; i < 20; ++i) CHECK(sample_entity(pair, a) == sample_entity(pair, b));

  std::vector<std::string> ten;
  for (int i = 0; i < 10; ++i) ten.push_back("e" + std::to_string(i));
  Lexicon lex("Patient", ten);
  RandomStream rng(9);
  std::map<std::string, int> counts;
  for (int i = 0; i < 100000; ++i) ++counts[sample_entity(lex, rng)];
  for (const auto& e : ten) CHECK(counts[e] == doctest::Approx(10000).epsilon(0.05));

  // With one retry the avoided entry appears with probability 1/n^2.
  std::map<std::string, int> avoided;
  RandomStream rng2(10);
  for (int i = 0; i < 100000; ++i) ++avoided[sample_entity(lex, rng2, "e0")];
  CHECK(avoided["e0"] == doctest::Approx(1000).epsilon(0.25));

  std::vector<std::string> small = {"a", "b", "c", "d", "e", "f"};
  Lexicon six("Patient", small);
  RandomStream rng3(11);
  std::set<std::string> seen;
  for (std::size_t i = 0; i < 50 * small.size(); ++i) seen.insert(sample_entity(six, rng3));
  CHECK(seen.size() == small.size());
}

TEST_CASE("registry resolves fine types and coarse unions") {
  LexiconRegistry reg({Lexicon("Patient", {"Ann", "Bo"}), Lexicon("Doctor", {"Cy", "Di", "Ed"}),
                       Lexicon("Username", {"fay01"})});
  auto doctor = reg.resolve("Doctor");
  CHECK(doctor.get() == reg.find("Doctor"));
  CHECK(doctor->entries() == std::vector<std::string>{"Cy", "Di", "Ed"});
  CHECK(reg.resolve("NAME")->size() == 6);
  CHECK(code_of([&] { reg.resolve("DATE"); }) == ErrorCode::kResolution);
  CHECK(code_of([&] { reg.resolve("Date"); }) == ErrorCode::kResolution);
  CHECK(code_of([&] { reg.resolve("Nurse"); }) == ErrorCode::kResolution);
  LexiconRegistry overlap({Lexicon("Hospital", {"Mercy", "Saint Ann"}), Lexicon("Location", {"Mercy", "Ohio"})});
  CHECK(overlap.resolve("LOCATION")->entries() == std::vector<std::string>{"Mercy", "Saint Ann", "Ohio"});
  CHECK(code_of([] { LexiconRegistry({Lexicon("Zip", {"1"}), Lexicon("Zip", {"2"})}); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("lexicon directories load one file per type") {
  testing::TempDir dir("lexdir");
  write_lexicon(dir.path() / "Doctor.txt", Lexicon("Doctor", {"A. Lee", "B. Ray"}));
  write_text_file(dir.path() / "Hospital.txt", "Mercy\nSaint Ann\n");
  write_text_file(dir.path() / "notes.md", "ignored\n");
  auto lexicons = load_lexicon_dir(dir.path());
  REQUIRE(lexicons.size() == 2);
  LexiconRegistry reg(std::move(lexicons));
  CHECK(reg.types() == std::vector<std::string>{"Doctor", "Hospital"});
  CHECK(reg.resolve("Doctor")->contains("B. Ray"));
  CHECK(code_of([&] { load_lexicon_dir(dir.path() / "missing"); }) == ErrorCode::kIo);
}

}  // namespace
}  // namespace phicon
