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

// PHI and context augmentation.
//
// Each PHI-bearing sentence is rewritten by up to three stages, always in this
// order:
//
//   1. PHI replacement: every entity span gets a same-type surface sampled
//      from the lexicon registry.
//   2. Synonym replacement (SR) of unambiguous, non-stopword Outside words.
//   3. Random insertion (RI): an adverb before verbs and adjectives, an
//      adjective before nouns.
//
// augment_corpus repeats this alpha times with independent per-sentence
// streams and appends the results to the untouched original corpus.

#ifndef PHICON_SRC_AUGMENT_HPP_
#define PHICON_SRC_AUGMENT_HPP_

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "lexicon.hpp"
#include "rng.hpp"
#include "synonyms.hpp"

namespace phicon {

struct AugmentConfig {
  unsigned alpha = 2;
  double sr_rate = 0.1;
  double ri_rate = 0.05;
  bool enable_phi = true;
  bool enable_sr = true;
  bool enable_ri = true;
  std::uint64_t master_seed = 0;
  bool drop_unchanged = true;
  // Copy PHI-free sentences verbatim into augmented documents.
  bool keep_context_sentences = false;

  void validate() const;
};

enum class AugmentStage { kPhi, kSr, kRi };
std::string_view stage_name(AugmentStage stage);

struct Replacement {
  EntitySpan span;  // position of the new surface in the augmented sentence
  std::string old_surface;
  std::string new_surface;
  friend bool operator==(const Replacement&, const Replacement&) = default;
};

struct AugmentRecord {
  std::string doc_id;  // id of the source document
  std::size_t sentence_index = 0;
  unsigned run_index = 0;
  std::set<AugmentStage> applied;  // stages that changed the sentence
  std::vector<Replacement> replacements;
};

struct PhiAugmentResult {
  Sentence sentence;
  std::vector<Replacement> replacements;
};

// Label types that name both a fine type and a category ("ID") resolve per
// `granularity`.
PhiAugmentResult phi_augment(const Sentence& sentence, const LexiconRegistry& registry,
                             RandomStream& rng, Granularity granularity = Granularity::kFine);

Sentence synonym_replace(const Sentence& sentence, const SynonymProvider& provider,
                         double sr_rate, RandomStream& rng);

Sentence random_insert(const Sentence& sentence, const SynonymProvider& provider, double ri_rate,
                       RandomStream& rng);

struct SentenceAugmentation {
  Sentence sentence;
  std::vector<Replacement> replacements;
  std::set<AugmentStage> applied;
};

std::optional<SentenceAugmentation> augment_sentence(const Sentence& sentence,
                                                     const LexiconRegistry& registry,
                                                     const SynonymProvider& provider,
                                                     const AugmentConfig& config,
                                                     RandomStream& rng,
                                                     Granularity granularity = Granularity::kFine);

// Stream key of one sentence in one augmentation run.
std::uint64_t sentence_seed(std::uint64_t master_seed, unsigned run_index, std::size_t doc_index,
                            std::size_t sentence_index);

// Coarse when any label uses a category-only name (NAME, LOCATION, ...).
Granularity detect_granularity(const Corpus& corpus);

bool has_phi(const Sentence& sentence);

struct AugmentResult {
  Corpus corpus;
  std::vector<AugmentRecord> records;
};

// Augmented documents are named "<id>#aug<run>" and follow all originals,
// run by run. Output is identical for every `jobs` value.
AugmentResult augment_corpus(const Corpus& corpus, const LexiconRegistry& registry,
                             const SynonymProvider& provider, const AugmentConfig& config,
                             std::size_t jobs = 1);

struct AugmentPlan {
  std::size_t documents = 0;
  std::size_t sentences = 0;
  std::size_t eligible_sentences = 0;
  // Upper bound; drop_unchanged may emit fewer.
  std::size_t max_augmented_sentences = 0;
};

AugmentPlan plan_augmentation(const Corpus& corpus, const AugmentConfig& config);

// One JSON object per line:
//   {"doc_id", "sentence_index", "run_index", "applied": [...],
//    "replacements": [{"start", "end", "type", "old", "new"}, ...]}
std::string format_records_jsonl(const std::vector<AugmentRecord>& records);

}  // namespace phicon

#endif  // PHICON_SRC_AUGMENT_HPP_
