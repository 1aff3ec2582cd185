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

// Averaged-perceptron BIO tagger with greedy, BIO-masked decoding.
//
// Model file (text, version 1):
//
//   phicon-tagger
//   version 1
//   template <feature template version>
//   epochs <n>
//   seed <n>
//   fingerprint <16 hex digits>
//   labels <L>
//   <label>                     x L, label table in score order
//   features <F>
//   <feature>\t<w_0> ... <w_L-1>   x F, sorted by feature, C99 hex floats
//   end

#ifndef PHICON_SRC_TAGGER_HPP_
#define PHICON_SRC_TAGGER_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corpus.hpp"

namespace phicon {

inline constexpr std::string_view kFeatureTemplateVersion = "phicon-features-1";
inline constexpr int kModelFormatVersion = 1;

struct TrainingMeta {
  std::size_t epochs = 0;
  std::uint64_t seed = 0;
  std::uint64_t corpus_fingerprint = 0;
  friend bool operator==(const TrainingMeta&, const TrainingMeta&) = default;
};

struct TaggerModel {
  std::vector<Label> labels;  // labels[0] is Outside
  std::unordered_map<std::string, std::vector<double>> weights;
  std::string feature_template_version{kFeatureTemplateVersion};
  TrainingMeta meta;
  friend bool operator==(const TaggerModel&, const TaggerModel&) = default;
};

// Observation features of one token. Decoding adds "bias" and the previous
// label ("prevlabel=<label>" or "prevlabel=<S>").
std::vector<std::string> featurize(const Sentence& sentence, std::size_t index);

std::uint64_t corpus_fingerprint(const Corpus& corpus);

TaggerModel train_tagger(const Corpus& corpus, std::size_t epochs, std::uint64_t seed);

std::vector<Label> predict(const TaggerModel& model, const Sentence& sentence);

// One label sequence per sentence, in corpus order.
std::vector<std::vector<Label>> predict_corpus(const TaggerModel& model, const Corpus& corpus,
                                               std::size_t jobs = 1);

std::string serialize_model(const TaggerModel& model);
TaggerModel parse_model(std::string_view text);
void save_model(const TaggerModel& model, const std::filesystem::path& path);
TaggerModel load_model(const std::filesystem::path& path);

}  // namespace phicon

#endif  // PHICON_SRC_TAGGER_HPP_
