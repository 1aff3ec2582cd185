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


#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "doctest.h"
#include "errors.hpp"
#include "support.hpp"
#include "synthgen.hpp"

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

std::set<std::string> coarse_slots(const SiteProfile& p) {
  std::set<std::string> out;
  for (const auto& t : p.templates)
    for (const auto& slot : t.slots) out.insert(testing::coarse_oracle(slot));
  return out;
}

TEST_CASE("templates parse typed slots") {
  SentenceTemplate t = parse_template("Pt <Patient> seen by Dr. <Doctor> on <Date> at <Hospital> .");
  CHECK(t.slots == std::vector<std::string>{"Patient", "Doctor", "Date", "Hospital"});
  CHECK(t.tokens.size() == 11);
  CHECK(t.tokens[1] == "<Patient>");
  CHECK(parse_template("No PHI here .").slots.empty());
  CHECK(code_of([] { parse_template("Seen by <Nurse> ."); }) == ErrorCode::kParse);
  CHECK(code_of([] { parse_template("   "); }) == ErrorCode::kParse);
}

TEST_CASE("built-in sites differ along entities, templates and formats") {
  auto [a, b] = builtin_profiles();
  CHECK(a.name == "SiteA");
  CHECK(b.name == "SiteB");
  for (const char* type : {"Patient", "Doctor", "Hospital", "Location"}) {
    CAPTURE(type);
    const auto& pa = a.entity_pools.at(type).entries();
    const auto& pb = b.entity_pools.at(type).entries();
    std::set<std::string> left(pa.begin(), pa.end());
    std::size_t shared = 0;
    for (const auto& e : pb) shared += left.count(e);
    CHECK(shared == 0);
  }
  std::set<std::string> ta, tb;
  for (const auto& t : a.templates) ta.insert(t.text);
  for (const auto& t : b.templates) tb.insert(t.text);
  std::vector<std::string> common;
  std::set_intersection(ta.begin(), ta.end(), tb.begin(), tb.end(), std::back_inserter(common));
  const double overlap = static_cast<double>(common.size()) / static_cast<double>(std::max(ta.size(), tb.size()));
  CHECK(template_overlap(a, b) == doctest::Approx(overlap));
  CHECK(overlap <= 0.2);
  CHECK(coarse_slots(a) == std::set<std::string>(testing::coarse_type_names().begin(), testing::coarse_type_names().end()));
  CHECK(coarse_slots(b) == std::set<std::string>(testing::coarse_type_names().begin(), testing::coarse_type_names().end()));
  CHECK(a.format_preferences.at("Date").patterns != b.format_preferences.at("Date").patterns);
  CHECK(a.format_preferences.at("Phone").patterns != b.format_preferences.at("Phone").patterns);
  CHECK(code_of([] { builtin_profile("SiteC"); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("generation is deterministic and BIO-valid") {
  SiteProfile a = builtin_profile("SiteA");
  Corpus one = generate_corpus(a, 1, {1, 1}, 5);
  REQUIRE(one.documents.size() == 1);
  CHECK(one.documents[0].sentences.size() == 1);
  CHECK(generate_corpus(a, 1, {1, 1}, 5) == one);

  Corpus c = generate_corpus(a, 40, {8, 15}, 3);
  CHECK(generate_corpus(a, 40, {8, 15}, 3, 4) == c);
  CHECK(!(generate_corpus(a, 40, {8, 15}, 4) == c));
  std::set<std::string> ids;
  for (const auto& d : c.documents) {
    ids.insert(d.id);
    CHECK(d.sentences.size() >= 8);
    CHECK(d.sentences.size() <= 15);
    for (const auto& s : d.sentences) CHECK(testing::bio_valid_oracle(testing::labels_of(s)));
  }
  CHECK(ids.size() == 40);
  CHECK(parse_conll(serialize_conll(c)) == c);
}

TEST_CASE("PHI density tracks the profile") {
  for (const char* name : {"SiteA", "SiteB"}) {
    CAPTURE(name);
    SiteProfile p = builtin_profile(name);
    Corpus c = generate_corpus(p, 200, {8, 15}, 11);
    CorpusStats st = corpus_stats(c);
    std::size_t sentences = 0;
    for (const auto& d : c.documents) sentences += d.sentences.size();
    const double mean_sentences = static_cast<double>(sentences) / static_cast<double>(c.documents.size());
    const double expected = p.phi_density * mean_sentences;
    CHECK(st.avg_phi_per_note >= 0.7 * expected);
    CHECK(st.avg_phi_per_note <= 1.3 * expected);
    CHECK(st.phi_counts.size() == 5);
  }
}

TEST_CASE("generated entities come from the site pools") {
  SiteProfile a = builtin_profile("SiteA");
  Corpus c = generate_corpus(a, 20, {8, 15}, 2);
  for (const auto& d : c.documents) {
    for (const auto& s : d.sentences) {
      for (const auto& span : extract_entities(s)) {
        CAPTURE(span.surface);
        CHECK(a.entity_pools.at(span.phi_type).contains(span.surface));
      }
    }
  }
}

TEST_CASE("generation rejects missing pools and bad ranges") {
  SiteProfile p;
  p.name = "Tiny";
  p.templates = {parse_template("Seen by <Doctor> ."), parse_template("Plain text .")};
  p.entity_pools.emplace("Patient", Lexicon("Patient", {"Ann"}));
  try {
    generate_corpus(p, 1, {1, 1}, 1);
    FAIL("generated without a Doctor pool");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("Doctor") != std::string::npos);
    CHECK(std::string(e.what()).find("Seen by <Doctor> .") != std::string::npos);
  }
  p.entity_pools.emplace("Doctor", Lexicon("Doctor", {"Cy Young"}));
  CHECK(code_of([&] { generate_corpus(p, 0, {1, 1}, 1); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([&] { generate_corpus(p, 1, {3, 2}, 1); }) == ErrorCode::kInvalidArgument);
  p.phi_density = 0.0;
  CHECK(code_of([&] { generate_corpus(p, 1, {1, 1}, 1); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("profiles load from files") {
  testing::TempDir dir("profile");
  write_text_file(dir.path() / "profile.toml",
                  "name = \"Clinic\"\nphi_density = 0.5\n\n[pools]\nDoctor = \"docs.txt\"\n\n"
                  "[format.Zip]\npatterns = ['9\\d{4}']\ncount = 50\n");
  write_text_file(dir.path() / "templates.txt",
                  "# comment\nSeen by <Doctor> in <Zip> .\nNothing to report .\n");
  write_text_file(dir.path() / "docs.txt", "Cy Young\nDi Ray\n");
  SiteProfile p = load_profile(dir.path() / "profile.toml");
  CHECK(p.name == "Clinic");
  CHECK(p.templates.size() == 2);
  CHECK(p.entity_pools.at("Doctor").size() == 2);
  CHECK(p.entity_pools.at("Zip").size() == 50);
  for (const auto& z : p.entity_pools.at("Zip").entries()) CHECK(z.front() == '9');
  Corpus c = generate_corpus(p, 5, {2, 4}, 1);
  CHECK(c.documents.size() == 5);

  write_text_file(dir.path() / "profile.toml", "name = \"Clinic\"\ncolour = \"red\"\n");
  CHECK(code_of([&] { load_profile(dir.path() / "profile.toml"); }) == ErrorCode::kParse);
  write_text_file(dir.path() / "profile.toml", "name = \"Clinic\"\n[format.Doctor]\ncount = 3\n");
  CHECK(code_of([&] { load_profile(dir.path() / "profile.toml"); }) == ErrorCode::kParse);
}

TEST_CASE("built-in resources cover every fine type") {
  LexiconRegistry reg = builtin_lexicon_registry(0);
  for (const auto& type : taxonomy().fine_types()) {
    CAPTURE(type);
    REQUIRE(reg.find(type) != nullptr);
    CHECK(!reg.find(type)->empty());
  }
  CHECK(reg.find("Zip")->size() == 4000);
  CHECK(builtin_lexicon_registry(0).find("Phone")->entries() == reg.find("Phone")->entries());
  CHECK(builtin_lexicon_registry(1).find("Phone")->entries() != reg.find("Phone")->entries());

  // The augmentation lexicons share no names or places with either site.
  auto [a, b] = builtin_profiles();
  for (const char* type : {"Patient", "Doctor", "Hospital", "Location"}) {
    for (const SiteProfile* site : {&a, &b}) {
      std::size_t shared = 0;
      for (const auto& e : site->entity_pools.at(type).entries()) shared += reg.find(type)->contains(e);
      CHECK(shared == 0);
    }
  }
  SynonymProvider syn = builtin_clinical_synonyms();
  CHECK(!syn.pool(PosTag::kAdverb).empty());
  CHECK(!syn.pool(PosTag::kAdjective).empty());
}

}  // namespace
}  // namespace phicon
