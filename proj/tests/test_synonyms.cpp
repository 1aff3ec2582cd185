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
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "doctest.h"
#include "errors.hpp"
#include "support.hpp"
#include "synonyms.hpp"

namespace phicon {
namespace {

namespace fs = std::filesystem;
using Words = std::vector<std::string>;

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kInvalidArgument;
}

fs::path wndb_dir() { return testing::data_dir() / "wndb"; }
fs::path tsv_path() { return testing::data_dir() / "synonyms.tsv"; }

TEST_CASE("part-of-speech names") {
  CHECK(parse_pos("noun") == PosTag::kNoun);
  CHECK(parse_pos("adj") == PosTag::kAdjective);
  CHECK(parse_pos("r") == PosTag::kAdverb);
  CHECK(!parse_pos("pronoun").has_value());
  CHECK(pos_name(PosTag::kVerb) == "verb");
}

TEST_CASE("the WNDB fixture loads shared synsets") {
  SynonymProvider p = load_wndb(wndb_dir());
  auto doctor = p.lookup_synonyms("doctor", PosTag::kNoun);
  CHECK(std::set<std::string>(doctor.begin(), doctor.end()).count("physician") == 1);
  CHECK(p.lookup_synonyms("ache", PosTag::kNoun).empty());
  CHECK(p.lookup_synonyms("lonely", PosTag::kAdjective).empty());
  CHECK(p.lookup_synonyms("quick", PosTag::kAdjective) == Words{"fast", "speedy"});
  CHECK(p.lookup_synonyms("Quick", PosTag::kAdjective) == Words{"fast", "speedy"});
  CHECK(p.lookup_synonyms("clinic", PosTag::kNoun) == Words{"health center"});
  CHECK(p.lookup_synonyms("zebra", PosTag::kNoun).empty());
  CHECK(p.lookup_synonyms("quick", PosTag::kNoun).empty());
}

TEST_CASE("part-of-speech lookup masks stopwords") {
  SynonymProvider p = load_wndb(wndb_dir());
  CHECK(p.lookup_pos("run") == std::set<PosTag>{PosTag::kNoun, PosTag::kVerb});
  CHECK(!p.unambiguous_pos("run").has_value());
  CHECK(p.unambiguous_pos("hospital") == PosTag::kNoun);
  CHECK(p.lookup_pos("zebra").empty());
  CHECK(p.lookup_pos("the").empty());
  CHECK(p.is_stopword("the"));
  CHECK(p.is_stopword("The"));
  CHECK(!p.is_stopword("hospital"));
  auto custom = p.with_stopwords({"hospital"});
  CHECK(custom.lookup_pos("hospital").empty());
  CHECK(custom.lookup_pos("the") == std::set<PosTag>{PosTag::kNoun});
}

TEST_CASE("the TSV twin matches the WNDB fixture") {
  SynonymProvider wn = load_wndb(wndb_dir());
  SynonymProvider tsv = load_tsv(tsv_path());
  CHECK(wn.dump() == tsv.dump());
  CHECK(load_wndb(wndb_dir()).dump() == wn.dump());
  CHECK(wn.pool(PosTag::kAdverb) == tsv.pool(PosTag::kAdverb));
}

TEST_CASE("WNDB synonymy is symmetric and excludes the lemma") {
  SynonymProvider p = load_wndb(wndb_dir());
  REQUIRE(!p.index().empty());
  for (const auto& [key, syns] : p.index()) {
    const auto& [lemma, pos] = key;
    CHECK(syns.count(lemma) == 0);
    for (const auto& other : p.lookup_synonyms(lemma, pos)) {
      auto back = p.lookup_synonyms(other, pos);
      CAPTURE(lemma);
      CAPTURE(other);
      CHECK(std::find(back.begin(), back.end(), lemma) != back.end());
    }
  }
}

TEST_CASE("WNDB loading reports missing and malformed files") {
  testing::TempDir empty("wndb-empty");
  CHECK(code_of([&] { load_wndb(empty.path()); }) == ErrorCode::kIo);

  testing::TempDir broken("wndb-broken");
  for (const auto& entry : fs::directory_iterator(wndb_dir())) {
    fs::copy_file(entry.path(), broken.path() / entry.path().filename());
  }
  std::string data = read_text_file(broken.path() / "data.verb");
  data += "garbage line without fields\n";
  write_text_file(broken.path() / "data.verb", data);
  try {
    load_wndb(broken.path());
    FAIL("accepted a malformed data line");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParse);
    CHECK(std::string(e.what()).find("data.verb") != std::string::npos);
  }
}

TEST_CASE("TSV providers hold exactly the listed entries") {
  SynonymProvider p = parse_synonym_tsv("met\tverb\tencountered,saw\n");
  CHECK(p.lookup_synonyms("met", PosTag::kVerb) == Words{"encountered", "saw"});
  CHECK(p.lookup_pos("met") == std::set<PosTag>{PosTag::kVerb});
  CHECK(p.lookup_pos("saw").empty());

  SynonymProvider empty = parse_synonym_tsv("");
  CHECK(empty.index().empty());

  SynonymProvider merged = parse_synonym_tsv("met\tverb\tsaw\nmet\tverb\tencountered,saw\n");
  CHECK(merged.lookup_synonyms("met", PosTag::kVerb) == Words{"encountered", "saw"});

  CHECK(code_of([] { parse_synonym_tsv("met\tpronoun\tsaw\n"); }) == ErrorCode::kParse);
  CHECK(code_of([] { load_tsv("/nonexistent/synonyms.tsv"); }) == ErrorCode::kIo);
}

TEST_CASE("the built-in stopword list is a sizable function-word list") {
  const auto& words = default_stopwords();
  CHECK(words.size() >= 150);
  for (const char* w : {"the", "a", "of", "and", "she", "in", "was"}) CHECK(words.count(w) == 1);
  for (const char* w : {"hospital", "doctor", "pain"}) CHECK(words.count(w) == 0);
}

}  // namespace
}  // namespace phicon
