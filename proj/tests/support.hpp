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

// Test-side oracles and generators. Nothing here calls the library code it
// is used to check: randomness comes from std::mt19937_64 and the reference
// computations are written out naively.

#ifndef PHICON_TESTS_SUPPORT_HPP_
#define PHICON_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "tagger.hpp"

namespace phicon::testing {

inline std::filesystem::path data_dir() { return PHICON_TEST_DATA_DIR; }

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("phicon-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline const std::vector<std::string>& fine_type_names() {
  static const std::vector<std::string> kNames = {
      "Organization", "Hospital", "Location", "Patient", "Doctor",       "ID",
      "Username",     "Zip",      "Date",     "Phone",   "MedicalRecord"};
  return kNames;
}

inline const std::vector<std::string>& coarse_type_names() {
  static const std::vector<std::string> kNames = {"NAME", "LOCATION", "DATE", "ID", "CONTACT"};
  return kNames;
}

// Coarse category of a fine type, written out from the taxonomy table.
inline std::string coarse_oracle(const std::string& fine) {
  if (fine == "Doctor" || fine == "Patient" || fine == "Username") return "NAME";
  if (fine == "Hospital" || fine == "Location" || fine == "Zip" || fine == "Organization") {
    return "LOCATION";
  }
  if (fine == "Date") return "DATE";
  if (fine == "ID" || fine == "MedicalRecord") return "ID";
  if (fine == "Phone") return "CONTACT";
  return fine;  // already coarse
}

inline std::string random_word(std::mt19937_64& rng) {
  static const std::string kAlphabet =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789.,-/():#";
  static const std::vector<std::string> kUnicode = {"\xc3\xa9", "\xc3\xbc", "\xe2\x82\xac",
                                                    "\xe6\x97\xa5"};
  std::uniform_int_distribution<int> len(1, 9);
  std::uniform_int_distribution<std::size_t> pick(0, kAlphabet.size() - 1);
  std::string w;
  int n = len(rng);
  for (int i = 0; i < n; ++i) {
    if (rng() % 20 == 0) {
      w += kUnicode[rng() % kUnicode.size()];
    } else {
      w += kAlphabet[pick(rng)];
    }
  }
  // A lone "#doc" prefix would read as a document marker.
  if (w.rfind("#", 0) == 0) w.insert(w.begin(), 'x');
  return w;
}

// Random BIO-valid sentence. Types come from `types`.
inline Sentence random_sentence(std::mt19937_64& rng, const std::vector<std::string>& types,
                                std::size_t max_len = 14) {
  Sentence s;
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  std::size_t n = len(rng);
  while (s.tokens.size() < n) {
    if (rng() % 3 == 0) {
      const std::string& type = types[rng() % types.size()];
      std::size_t span = 1 + rng() % 3;
      for (std::size_t k = 0; k < span && s.tokens.size() < n; ++k) {
        s.tokens.push_back({random_word(rng), k == 0 ? Label::begin(type) : Label::inside(type)});
      }
    } else {
      s.tokens.push_back({random_word(rng), Label::outside()});
    }
  }
  return s;
}

inline Corpus random_corpus(std::mt19937_64& rng, const std::vector<std::string>& types,
                            std::size_t max_docs = 4, std::size_t max_sentences = 5) {
  Corpus c;
  std::size_t docs = 1 + rng() % max_docs;
  for (std::size_t d = 0; d < docs; ++d) {
    Document doc;
    doc.id = "doc-" + std::to_string(d) + "-" + std::to_string(rng() % 1000);
    std::size_t n = 1 + rng() % max_sentences;
    for (std::size_t i = 0; i < n; ++i) doc.sentences.push_back(random_sentence(rng, types));
    c.documents.push_back(std::move(doc));
  }
  return c;
}

// BIO rule checked token by token: I-X needs a preceding B-X or I-X.
inline bool bio_valid_oracle(const std::vector<Label>& labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].kind != LabelKind::kInside) continue;
    if (i == 0) return false;
    const Label& prev = labels[i - 1];
    if (prev.kind == LabelKind::kOutside || prev.type != labels[i].type) return false;
  }
  return true;
}

inline std::vector<Label> labels_of(const Sentence& s) {
  std::vector<Label> out;
  for (const auto& t : s.tokens) out.push_back(t.label);
  return out;
}

struct BruteCounts {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

// Binary token confusion counts by direct enumeration.
inline BruteCounts brute_counts(const std::vector<std::vector<Label>>& gold,
                                const std::vector<std::vector<Label>>& pred) {
  BruteCounts c;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    for (std::size_t t = 0; t < gold[s].size(); ++t) {
      const bool g = gold[s][t].kind != LabelKind::kOutside;
      const bool p = pred[s][t].kind != LabelKind::kOutside;
      if (g && p) ++c.tp;
      if (!g && p) ++c.fp;
      if (g && !p) ++c.fn;
      if (!g && !p) ++c.tn;
    }
  }
  return c;
}

// Random model with subnormal, signed-zero and ordinary weights.
inline TaggerModel random_model(std::mt19937_64& rng) {
  TaggerModel m;
  m.labels.push_back(Label::outside());
  std::size_t n_types = 1 + rng() % 4;
  for (std::size_t t = 0; t < n_types; ++t) {
    const auto& type = fine_type_names()[rng() % fine_type_names().size()];
    if (std::find(m.labels.begin(), m.labels.end(), Label::begin(type)) != m.labels.end()) continue;
    m.labels.push_back(Label::begin(type));
    m.labels.push_back(Label::inside(type));
  }
  std::uniform_real_distribution<double> w(-50.0, 50.0);
  std::size_t n_features = rng() % 40;
  for (std::size_t f = 0; f < n_features; ++f) {
    std::vector<double> row(m.labels.size());
    for (auto& x : row) {
      switch (rng() % 6) {
        case 0: x = 0.0; break;
        case 1: x = -0.0; break;
        case 2: x = std::ldexp(w(rng), -1060); break;  // subnormal range
        default: x = w(rng) / 3.0;
      }
    }
    m.weights["f" + std::to_string(f) + "=" + random_word(rng)] = row;
  }
  m.meta = {1 + rng() % 9, rng(), rng()};
  return m;
}

}  // namespace phicon::testing

#endif  // PHICON_TESTS_SUPPORT_HPP_
