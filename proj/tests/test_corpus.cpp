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
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "doctest.h"
#include "errors.hpp"
#include "support.hpp"

namespace phicon {
namespace {

using testing::bio_valid_oracle;
using testing::labels_of;

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kInvalidArgument;
}

Sentence make(std::initializer_list<std::pair<const char*, const char*>> tokens) {
  Sentence s;
  for (const auto& [text, label] : tokens) s.tokens.push_back({text, parse_label(label)});
  return s;
}

Sentence washington_sentence() {
  return make({{"She", "O"},
               {"met", "O"},
               {"Washington", "B-Patient"},
               {"in", "O"},
               {"the", "O"},
               {"Ohio", "B-Hospital"},
               {"Hospital", "I-Hospital"}});
}

Corpus one_doc(std::vector<Sentence> sentences, std::string id = "d1") {
  Corpus c;
  c.documents.push_back({std::move(id), std::move(sentences)});
  return c;
}

TEST_CASE("taxonomy lists the fine types and their categories") {
  const auto& tx = taxonomy();
  CHECK(tx.fine_types() == testing::fine_type_names());
  CHECK(tx.coarse_types() == testing::coarse_type_names());
  for (const auto& fine : tx.fine_types()) CHECK(tx.coarse_of(fine) == testing::coarse_oracle(fine));
  CHECK(tx.generator_backed() ==
        std::vector<std::string>{"ID", "Username", "Zip", "Date", "Phone", "MedicalRecord"});
  CHECK(tx.members("NAME") == std::vector<std::string>{"Doctor", "Patient", "Username"});
  CHECK(tx.coarse_of("DATE") == "DATE");
}

TEST_CASE("labels parse and print") {
  CHECK(parse_label("O") == Label::outside());
  CHECK(parse_label("B-Doctor") == Label::begin("Doctor"));
  CHECK(parse_label("I-NAME") == Label::inside("NAME"));
  CHECK(Label::inside("Zip").str() == "I-Zip");
  CHECK(code_of([] { parse_label("B-Nurse"); }) == ErrorCode::kParse);
  CHECK(code_of([] { parse_label("X-Doctor"); }) == ErrorCode::kParse);
  CHECK(code_of([] { parse_label("B-doctor"); }) == ErrorCode::kParse);
}

TEST_CASE("parse_conll reads a single implicit sentence") {
  const std::string text = "She\tO\nmet\tO\nWashington\tB-Patient\n";
  Corpus c = parse_conll(text);
  REQUIRE(c.documents.size() == 1);
  REQUIRE(c.documents[0].sentences.size() == 1);
  const Sentence& s = c.documents[0].sentences[0];
  REQUIRE(s.size() == 3);
  auto spans = extract_entities(s);
  REQUIRE(spans.size() == 1);
  CHECK(taxonomy().coarse_of(spans[0].phi_type) == "NAME");
  CHECK(serialize_conll(c) == text);
}

TEST_CASE("empty input yields an empty corpus and serializes to nothing") {
  Corpus c = parse_conll("");
  CHECK(c.documents.empty());
  CHECK(serialize_conll(c).empty());
}

TEST_CASE("a dangling inside label is an error unless repaired") {
  const std::string text = "seen\tO\n\nWashington\tI-Patient\nsmiled\tO\n";
  try {
    parse_conll(text);
    FAIL("strict parse accepted a dangling inside label");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParse);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  Corpus repaired = parse_conll(text, {.repair = true});
  CHECK(repaired.documents[0].sentences[1].tokens[0].label == Label::begin("Patient"));
}

TEST_CASE("malformed lines report their line number") {
  for (const char* text : {"a\tO\nb\n", "a\tO\nb\tO\textra\n", "a\tO\nb\tB-Nurse\n"}) {
    try {
      parse_conll(text);
      FAIL("accepted malformed input");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kParse);
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
}

TEST_CASE("two documents serialize with two markers") {
  Corpus c;
  c.documents.push_back({"a", {washington_sentence()}});
  c.documents.push_back({"b", {washington_sentence(), washington_sentence()}});
  std::string text = serialize_conll(c);
  std::size_t markers = 0, pos = 0;
  while ((pos = text.find("#doc id=", pos)) != std::string::npos) {
    ++markers;
    ++pos;
  }
  CHECK(markers == 2);
  CHECK(text.back() == '\n');
  CHECK(text[text.size() - 2] != '\n');
  CHECK(parse_conll(text) == c);
}

TEST_CASE("validate_bio follows the transition rule") {
  CHECK(validate_bio(make({{"a", "O"}, {"b", "O"}})).empty());
  CHECK(validate_bio(make({{"1", "B-Date"}, {"2", "I-Date"}, {"3", "I-Date"}})).empty());
  auto v = validate_bio(make({{"call", "O"}, {"555", "I-Phone"}}));
  REQUIRE(v.size() == 1);
  CHECK(v[0].position == 1);
  CHECK(validate_bio(make({{"x", "B-Date"}, {"y", "I-Phone"}})).size() == 1);
}

TEST_CASE("validate_bio agrees with the oracle on random label sequences") {
  std::mt19937_64 rng(11);
  const std::vector<std::string> types = {"Date", "Phone", "NAME"};
  for (int trial = 0; trial < 3000; ++trial) {
    Sentence s;
    std::size_t n = 1 + rng() % 8;
    for (std::size_t i = 0; i < n; ++i) {
      int kind = static_cast<int>(rng() % 3);
      const std::string& type = types[rng() % types.size()];
      Label l = kind == 0 ? Label::outside() : kind == 1 ? Label::begin(type) : Label::inside(type);
      s.tokens.push_back({"t", l});
    }
    const bool valid = bio_valid_oracle(labels_of(s));
    CHECK(validate_bio(s).empty() == valid);
    CHECK(is_valid_bio(s) == valid);
    // Strict parsing accepts exactly the valid sentences.
    bool parsed = true;
    try {
      parse_conll(serialize_conll(one_doc({s})));
    } catch (const Error&) {
      parsed = false;
    }
    CHECK(parsed == valid);
  }
}

TEST_CASE("extract_entities on the example sentence") {
  auto spans = extract_entities(washington_sentence());
  REQUIRE(spans.size() == 2);
  CHECK(spans[0] == EntitySpan{0, 2, 3, "Patient", "Washington"});
  CHECK(spans[1] == EntitySpan{0, 5, 7, "Hospital", "Ohio Hospital"});
  CHECK(extract_entities(make({{"a", "O"}})).empty());
  auto adjacent = extract_entities(make({{"A1", "B-ID"}, {"A2", "B-ID"}}));
  REQUIRE(adjacent.size() == 2);
  CHECK(adjacent[0].end == adjacent[1].start);
  CHECK(code_of([] { extract_entities(make({{"x", "I-ID"}})); }) == ErrorCode::kDomain);
}

TEST_CASE("spans determine labels on random sentences") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    Sentence s = testing::random_sentence(rng, testing::fine_type_names());
    auto spans = extract_entities(s, 3);
    std::size_t covered = 0;
    for (std::size_t k = 0; k < spans.size(); ++k) {
      CHECK(spans[k].sentence_index == 3);
      CHECK(spans[k].start < spans[k].end);
      if (k > 0) CHECK(spans[k - 1].end <= spans[k].start);
      covered += spans[k].end - spans[k].start;
    }
    std::size_t phi_tokens = 0;
    for (const auto& t : s.tokens) phi_tokens += t.label.is_phi();
    CHECK(covered == phi_tokens);
    Sentence blank = s;
    for (auto& t : blank.tokens) t.label = Label::outside();
    CHECK(relabel_from_spans(blank, spans) == s);
  }
}

TEST_CASE("map_to_coarse renames types and keeps boundaries") {
  Corpus c = one_doc({make({{"Dr", "O"}, {"Lee", "B-Doctor"}, {"02139", "B-Zip"}})});
  Corpus m = map_to_coarse(c);
  const auto& toks = m.documents[0].sentences[0].tokens;
  CHECK(toks[1].label == Label::begin("NAME"));
  CHECK(toks[2].label == Label::begin("LOCATION"));
  Corpus plain = one_doc({make({{"a", "O"}, {"b", "O"}})});
  CHECK(map_to_coarse(plain) == plain);
  CHECK(code_of([&] { map_to_coarse(m); }) == ErrorCode::kDomain);

  std::mt19937_64 rng(8);
  Corpus all = testing::random_corpus(rng, testing::fine_type_names(), 6, 8);
  Sentence every;
  for (const auto& fine : testing::fine_type_names()) every.tokens.push_back({"x", Label::begin(fine)});
  all.documents[0].sentences.push_back(every);
  Corpus coarse = map_to_coarse(all);
  std::set<std::string> types;
  for (std::size_t d = 0; d < all.documents.size(); ++d) {
    for (std::size_t i = 0; i < all.documents[d].sentences.size(); ++i) {
      const Sentence& before = all.documents[d].sentences[i];
      const Sentence& after = coarse.documents[d].sentences[i];
      CHECK(is_valid_bio(after));
      REQUIRE(before.size() == after.size());
      for (std::size_t t = 0; t < before.size(); ++t) {
        CHECK(before.tokens[t].text == after.tokens[t].text);
        CHECK(before.tokens[t].label.kind == after.tokens[t].label.kind);
        if (after.tokens[t].label.is_phi()) {
          CHECK(after.tokens[t].label.type == testing::coarse_oracle(before.tokens[t].label.type));
          types.insert(after.tokens[t].label.type);
        }
      }
    }
  }
  CHECK(types.size() == 5);
}

Corpus with_type_count(const std::string& type, int count) {
  Corpus c;
  Document d{"d", {}};
  for (int i = 0; i < count; ++i) d.sentences.push_back(make({{"x", "O"}, {"y", "O"}}));
  for (int i = 0; i < count; ++i) {
    d.sentences[i].tokens[1].label = Label::begin(type);
  }
  d.sentences.push_back(make({{"2001", "B-Date"}}));
  c.documents.push_back(d);
  return c;
}

std::size_t phi_token_count(const Corpus& c) {
  std::size_t n = 0;
  for (const auto& d : c.documents)
    for (const auto& s : d.sentences)
      for (const auto& t : s.tokens) n += t.label.is_phi();
  return n;
}

TEST_CASE("filter_rare_types uses a strict threshold") {
  Corpus c19 = with_type_count("Doctor", 19);
  CHECK(filter_rare_types(c19, 0) == c19);
  Corpus f19 = filter_rare_types(c19, 20);
  CHECK(type_frequencies(f19).count("Doctor") == 0);
  Corpus c20 = with_type_count("Doctor", 20);
  CHECK(type_frequencies(filter_rare_types(c20, 20)).at("Doctor") == 20);

  std::mt19937_64 rng(21);
  Corpus r = testing::random_corpus(rng, testing::fine_type_names(), 6, 10);
  std::size_t previous = phi_token_count(r);
  for (std::size_t threshold = 0; threshold < 20; ++threshold) {
    Corpus f = filter_rare_types(r, threshold);
    std::size_t remaining = phi_token_count(f);
    CHECK(remaining <= previous);
    previous = remaining;
    for (const auto& d : f.documents)
      for (const auto& s : d.sentences) CHECK(is_valid_bio(s));
  }
}

TEST_CASE("split sizes follow the floor and remainder rule") {
  CHECK(split_sizes(10, {0.7, 0.1, 0.2}) == std::array<std::size_t, 3>{7, 1, 2});
  CHECK(split_sizes(3, {0.7, 0.1, 0.2}) == std::array<std::size_t, 3>{2, 0, 1});
  for (std::size_t n = 3; n < 200; ++n) {
    auto sizes = split_sizes(n, {0.7, 0.1, 0.2});
    CHECK(sizes[0] + sizes[1] + sizes[2] == n);
  }
  CHECK(code_of([] { split_sizes(10, {0.5, 0.5, 0.5}); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("split_corpus partitions documents deterministically") {
  std::mt19937_64 rng(4);
  Corpus c;
  for (int i = 0; i < 23; ++i) {
    c.documents.push_back({"doc" + std::to_string(i), {testing::random_sentence(rng, {"Date"})}});
  }
  CorpusSplit a = split_corpus(c, {0.7, 0.1, 0.2}, 9);
  CorpusSplit b = split_corpus(c, {0.7, 0.1, 0.2}, 9);
  CHECK(a.train == b.train);
  CHECK(a.dev == b.dev);
  CHECK(a.test == b.test);
  auto sizes = split_sizes(23, {0.7, 0.1, 0.2});
  CHECK(a.train.documents.size() == sizes[0]);
  CHECK(a.dev.documents.size() == sizes[1]);
  CHECK(a.test.documents.size() == sizes[2]);
  std::multiset<std::string> ids;
  for (const Corpus* part : {&a.train, &a.dev, &a.test})
    for (const auto& d : part->documents) ids.insert(d.id);
  std::multiset<std::string> expected;
  for (const auto& d : c.documents) expected.insert(d.id);
  CHECK(ids == expected);
  CorpusSplit other = split_corpus(c, {0.7, 0.1, 0.2}, 10);
  CHECK(!(other.train == a.train));
  Corpus tiny;
  tiny.documents = {c.documents[0], c.documents[1]};
  CHECK(code_of([&] { split_corpus(tiny, {0.7, 0.1, 0.2}, 1); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("corpus_stats averages over notes") {
  CorpusStats empty = corpus_stats(Corpus{});
  CHECK(empty.note_count == 0);
  CHECK(empty.avg_tokens_per_note == 0.0);
  CHECK(empty.avg_phi_per_note == 0.0);
  CHECK(empty.phi_counts.empty());

  Corpus c;
  c.documents.push_back({"a", {make({{"x", "O"}, {"Lee", "B-Doctor"}, {"y", "O"}, {"z", "O"}})}});
  c.documents.push_back(
      {"b", {make({{"p", "O"}, {"q", "O"}, {"r", "O"}}), make({{"1", "B-Date"}, {"2", "I-Date"}, {"s", "O"}})}});
  CorpusStats st = corpus_stats(c);
  CHECK(st.note_count == 2);
  CHECK(st.avg_tokens_per_note == 5.0);
  CHECK(st.avg_phi_per_note == 1.0);
  CHECK(st.phi_counts.at("NAME") == 1);
  CHECK(st.phi_counts.at("DATE") == 1);
  CHECK(format_stats(st).find("#notes") != std::string::npos);
}

TEST_CASE("random corpora round-trip through text and files") {
  std::mt19937_64 rng(77);
  testing::TempDir dir("corpus");
  for (int trial = 0; trial < 200; ++trial) {
    const auto& types = trial % 2 ? testing::fine_type_names() : testing::coarse_type_names();
    Corpus c = testing::random_corpus(rng, types);
    CHECK(parse_conll(serialize_conll(c)) == c);
  }
  Corpus c = testing::random_corpus(rng, testing::fine_type_names());
  write_conll(dir.path() / "c.conll", c);
  CHECK(read_conll(dir.path() / "c.conll") == c);
  CHECK(code_of([&] { read_conll(dir.path() / "missing.conll"); }) == ErrorCode::kIo);
}

}  // namespace
}  // namespace phicon
