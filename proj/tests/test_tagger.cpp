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
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "doctest.h"
#include "errors.hpp"
#include "support.hpp"
#include "tagger.hpp"

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

Sentence make(std::initializer_list<std::pair<const char*, const char*>> tokens) {
  Sentence s;
  for (const auto& [text, label] : tokens) s.tokens.push_back({text, parse_label(label)});
  return s;
}

bool has(const std::vector<std::string>& features, const std::string& f) {
  return std::find(features.begin(), features.end(), f) != features.end();
}

Corpus toy_corpus() {
  Corpus c;
  c.documents.push_back(
      {"toy",
       {make({{"She", "O"}, {"met", "O"}, {"Washington", "B-Patient"}, {"in", "O"}, {"the", "O"},
              {"Ohio", "B-Hospital"}, {"Hospital", "I-Hospital"}}),
        make({{"Call", "O"}, {"617-555-0100", "B-Phone"}, {"today", "O"}}),
        make({{"Seen", "O"}, {"on", "O"}, {"03/04/2011", "B-Date"}, {"by", "O"}, {"Dr", "O"},
              {"Lee", "B-Doctor"}}),
        make({{"Zip", "O"}, {"02139", "B-Zip"}, {"noted", "O"}}),
        make({{"MRN", "O"}, {"1234567", "B-MedicalRecord"}, {"on", "O"}, {"file", "O"}})}});
  return c;
}

TEST_CASE("featurize applies the template") {
  Sentence s = toy_corpus().documents[0].sentences[0];
  auto f = featurize(s, 2);
  for (const char* want : {"w=washington", "shape=Xxxxx", "suf3=ton", "prev=met", "next=in",
                           "bigram=met|washington", "istitle=1", "pre1=w"}) {
    CAPTURE(want);
    CHECK(has(f, want));
  }
  CHECK(!has(f, "start=1"));
  auto first = featurize(s, 0);
  CHECK(has(first, "prev=<S>"));
  CHECK(has(first, "start=1"));
  CHECK(has(featurize(s, 6), "next=</S>"));
  auto zip = featurize(make({{"02139", "B-Zip"}}), 0);
  CHECK(has(zip, "shape=ddddd"));
  CHECK(has(zip, "isdigit=1"));
  CHECK(has(zip, "hasdigit=1"));
  CHECK(has(featurize(make({{"a-b", "O"}}), 0), "hashyphen=1"));
  CHECK(code_of([&] { featurize(s, 7); }) == ErrorCode::kInvalidArgument);
  CHECK(featurize(s, 3) == featurize(s, 3));
}

TEST_CASE("training memorizes a toy corpus") {
  Corpus c = toy_corpus();
  TaggerModel m = train_tagger(c, 10, 1);
  CHECK(m.labels.front() == Label::outside());
  std::size_t right = 0, total = 0;
  for (const auto& s : c.documents[0].sentences) {
    auto pred = predict(m, s);
    REQUIRE(pred.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) right += pred[i] == s.tokens[i].label;
    total += s.size();
  }
  CHECK(static_cast<double>(right) / static_cast<double>(total) >= 0.95);
  CHECK(m.meta.epochs == 10);
  CHECK(m.meta.seed == 1);
  CHECK(m.meta.corpus_fingerprint == corpus_fingerprint(c));
}

TEST_CASE("training is deterministic and validates its inputs") {
  Corpus c = toy_corpus();
  CHECK(train_tagger(c, 3, 7) == train_tagger(c, 3, 7));
  CHECK(code_of([&] { train_tagger(c, 0, 7); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { train_tagger(Corpus{}, 3, 7); }) == ErrorCode::kInvalidArgument);
  Corpus bad = c;
  bad.documents[0].sentences[0].tokens[0].label = Label::inside("Doctor");
  CHECK(code_of([&] { train_tagger(bad, 3, 7); }) == ErrorCode::kDomain);
}

TEST_CASE("predictions are BIO-valid on arbitrary sentences") {
  std::mt19937_64 rng(2);
  Corpus train = testing::random_corpus(rng, testing::fine_type_names(), 6, 8);
  TaggerModel m = train_tagger(train, 3, 4);
  for (int trial = 0; trial < 500; ++trial) {
    Sentence s = testing::random_sentence(rng, testing::fine_type_names(), 20);
    auto pred = predict(m, s);
    REQUIRE(pred.size() == s.size());
    CHECK(testing::bio_valid_oracle(pred));
  }
  CHECK(predict(m, Sentence{}).empty());
}

TEST_CASE("parallel prediction matches serial prediction") {
  std::mt19937_64 rng(3);
  Corpus c = testing::random_corpus(rng, testing::fine_type_names(), 8, 8);
  TaggerModel m = train_tagger(c, 2, 1);
  CHECK(predict_corpus(m, c, 1) == predict_corpus(m, c, 4));
}

TEST_CASE("model text round-trips exactly") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    TaggerModel m = testing::random_model(rng);
    TaggerModel back = parse_model(serialize_model(m));
    CHECK(back == m);
    for (const auto& [name, row] : m.weights) {
      const auto& other = back.weights.at(name);
      for (std::size_t i = 0; i < row.size(); ++i) CHECK(std::signbit(row[i]) == std::signbit(other[i]));
    }
  }
}

TEST_CASE("saved models load with equal predictions") {
  testing::TempDir dir("model");
  Corpus c = toy_corpus();
  TaggerModel m = train_tagger(c, 5, 9);
  save_model(m, dir.path() / "m.model");
  TaggerModel back = load_model(dir.path() / "m.model");
  CHECK(back == m);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    Sentence probe = testing::random_sentence(rng, {"Date"});
    CHECK(predict(m, probe) == predict(back, probe));
  }
  CHECK(code_of([&] { save_model(m, dir.path() / "no" / "such" / "dir" / "m.model"); }) == ErrorCode::kIo);
  CHECK(code_of([&] { load_model(dir.path() / "absent.model"); }) == ErrorCode::kIo);
}

TEST_CASE("bad headers and truncation are reported") {
  TaggerModel m = train_tagger(toy_corpus(), 2, 1);
  std::string text = serialize_model(m);
  std::string bad_magic = text;
  bad_magic.replace(0, 6, "PHICON");
  CHECK(code_of([&] { parse_model(bad_magic); }) == ErrorCode::kVersion);
  std::string wrong_version = text;
  const std::size_t at = wrong_version.find("version 1\n");
  REQUIRE(at != std::string::npos);
  wrong_version.replace(at, 10, "version 99\n");
  CHECK(code_of([&] { parse_model(wrong_version); }) == ErrorCode::kVersion);
  CHECK(code_of([&] { parse_model(text.substr(0, text.size() / 2)); }) == ErrorCode::kParse);
  CHECK(code_of([&] { parse_model(text.substr(0, text.size() - 4)); }) == ErrorCode::kParse);
}

}  // namespace
}  // namespace phicon
