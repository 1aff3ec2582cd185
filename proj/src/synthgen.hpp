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

// Synthetic clinical-note sites.
//
// A site is a pool of sentence templates plus entity pools. Template tokens
// are separated by single spaces; a token "<Type>" is a slot for a fine PHI
// type, filled with a pool entry whose space-separated parts become B/I
// tokens.
//
// Profile file (config syntax, paths relative to the profile file):
//
//   name = "SiteA"
//   phi_density = 1.2          # expected PHI spans per sentence
//   templates = "templates.txt"
//   [pools]                    # optional; default "<Type>.txt"
//   Patient = "Patient.txt"
//   [format.Date]              # generator-backed slot types
//   patterns = ["<MM>/<DD>/<YYYY>"]
//   weights = [1.0]            # optional
//   count = 400                # optional, pool size
//
// Generator-backed pools are generated from the format sections (default
// patterns when a section is absent) with a seed derived from the profile
// name, so a profile always carries the same pools.

#ifndef PHICON_SRC_SYNTHGEN_HPP_
#define PHICON_SRC_SYNTHGEN_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "corpus.hpp"
#include "lexicon.hpp"
#include "synonyms.hpp"

namespace phicon {

struct SentenceTemplate {
  std::vector<std::string> tokens;  // slot tokens keep their "<Type>" form
  std::vector<std::string> slots;   // slot types in order of appearance
  std::string text;
};

// Throws kParse on empty templates or slots naming an unknown fine type.
SentenceTemplate parse_template(std::string_view text);

struct SiteProfile {
  std::string name;
  std::vector<SentenceTemplate> templates;
  std::map<std::string, Lexicon> entity_pools;  // fine type -> pool
  double phi_density = 1.0;
  std::map<std::string, GeneratorSpec> format_preferences;

  void validate() const;
};

inline constexpr std::size_t kDefaultProfilePoolSize = 400;

using FileReader = std::function<std::string(const std::string& relative)>;

SiteProfile parse_profile(std::string_view config_text, std::string_view origin,
                          const FileReader& read);
SiteProfile load_profile(const std::filesystem::path& profile_file);

// The two shipped sites, SiteA then SiteB.
std::pair<SiteProfile, SiteProfile> builtin_profiles();
SiteProfile builtin_profile(std::string_view name);

struct SentenceRange {
  std::size_t min = 8;
  std::size_t max = 15;
};

inline constexpr std::size_t kDefaultSiteDocuments = 200;

// Documents are named "<profile>-NNNN". Output is identical for every `jobs`.
Corpus generate_corpus(const SiteProfile& profile, std::size_t n_documents,
                       SentenceRange sentences, std::uint64_t seed, std::size_t jobs = 1);

// Fraction of distinct templates of `a` that also occur in `b`, over the
// larger distinct-template count.
double template_overlap(const SiteProfile& a, const SiteProfile& b);

// Augmentation resources shipped with the site fixtures: name and location
// lexicons disjoint from both sites, generated identifier lexicons, and the
// clinical synonym table.
LexiconRegistry builtin_lexicon_registry(std::uint64_t seed = 0);
SynonymProvider builtin_clinical_synonyms();

}  // namespace phicon

#endif  // PHICON_SRC_SYNTHGEN_HPP_
