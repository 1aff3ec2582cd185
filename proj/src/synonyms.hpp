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

// Synonym and part-of-speech lookup for context augmentation.

#ifndef PHICON_SRC_SYNONYMS_HPP_
#define PHICON_SRC_SYNONYMS_HPP_

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace phicon {

enum class PosTag { kNoun = 0, kVerb = 1, kAdjective = 2, kAdverb = 3 };

std::string_view pos_name(PosTag pos);
// Accepts noun/verb/adj/adjective/adv/adverb and the WordNet letters n/v/a/s/r.
std::optional<PosTag> parse_pos(std::string_view text);

// ASCII lowercase; other bytes pass through.
std::string fold_case(std::string_view text);

// Trims, turns underscores into spaces and collapses whitespace runs.
std::string normalize_lemma(std::string_view raw);

// The built-in English stopword list (179 function words).
const std::set<std::string, std::less<>>& default_stopwords();
std::set<std::string, std::less<>> load_stopwords(const std::filesystem::path& path);

class SynonymProvider {
 public:
  using Key = std::pair<std::string, PosTag>;
  using Index = std::map<Key, std::set<std::string>>;
  using PosIndex = std::map<std::string, std::set<PosTag>, std::less<>>;

  SynonymProvider();
  SynonymProvider(Index index, PosIndex pos_index,
                  std::set<std::string, std::less<>> stopwords = default_stopwords());

  // Lexicographically sorted, lowercase, never contains the folded word.
  std::vector<std::string> lookup_synonyms(std::string_view word, PosTag pos) const;

  // Empty for stopwords and unknown words.
  std::set<PosTag> lookup_pos(std::string_view word) const;

  // The single POS of an unambiguous word, if any.
  std::optional<PosTag> unambiguous_pos(std::string_view word) const;

  bool is_stopword(std::string_view word) const;

  // Sorted non-stopword lemmas known under `pos`.
  const std::vector<std::string>& pool(PosTag pos) const { return pools_[static_cast<int>(pos)]; }

  SynonymProvider with_stopwords(std::set<std::string, std::less<>> stopwords) const;

  const Index& index() const { return index_; }
  const PosIndex& pos_index() const { return pos_index_; }

  // Deterministic text dump of the whole index.
  std::string dump() const;

 private:
  void build_pools();

  Index index_;
  PosIndex pos_index_;
  std::set<std::string, std::less<>> stopwords_;
  std::array<std::vector<std::string>, 4> pools_;
};

// WordNet 3.x database directory (index.{noun,verb,adj,adv} and
// data.{noun,verb,adj,adv}).
SynonymProvider load_wndb(const std::filesystem::path& directory);

// Lines "<lemma>\t<pos>\t<syn1>,<syn2>,..."; repeated (lemma, pos) lines merge.
SynonymProvider parse_synonym_tsv(std::string_view text, std::string_view origin = "<tsv>");
SynonymProvider load_tsv(const std::filesystem::path& path);

}  // namespace phicon

#endif  // PHICON_SRC_SYNONYMS_HPP_
