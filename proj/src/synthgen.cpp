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

#include "synthgen.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "builtin_data.hpp"
#include "config_text.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace phicon {

SentenceTemplate parse_template(std::string_view text) {
  SentenceTemplate t;
  t.text = std::string(text);
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t sp = text.find(' ', pos);
    std::string_view tok = text.substr(pos, sp == std::string_view::npos ? text.npos : sp - pos);
    pos = sp == std::string_view::npos ? text.size() : sp + 1;
    if (tok.empty()) continue;
    if (tok.size() > 2 && tok.front() == '<' && tok.back() == '>') {
      std::string type(tok.substr(1, tok.size() - 2));
      if (!taxonomy().is_fine(type)) {
        fail(ErrorCode::kParse, "template '" + t.text + "': unknown slot type <" + type + ">");
      }
      t.slots.push_back(type);
    } else if (!is_valid_token_text(tok)) {
      fail(ErrorCode::kParse, "template '" + t.text + "': invalid token '" + std::string(tok) + "'");
    }
    t.tokens.emplace_back(tok);
  }
  if (t.tokens.empty()) fail(ErrorCode::kParse, "empty template");
  return t;
}

void SiteProfile::validate() const {
  if (name.empty()) fail(ErrorCode::kInvalidArgument, "site profile needs a name");
  if (!(phi_density > 0.0)) fail(ErrorCode::kInvalidArgument, "phi_density of " + name + " must be positive");
  if (templates.empty()) fail(ErrorCode::kInvalidArgument, "site profile " + name + " has no templates");
  bool any_slot = std::any_of(templates.begin(), templates.end(), [](const auto& t) { return !t.slots.empty(); });
  if (!any_slot) {
    fail(ErrorCode::kInvalidArgument, "site profile " + name + " has no template with a PHI slot");
  }
}

namespace {

std::vector<std::string> template_lines(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto first = line.find_first_not_of(' ');
    if (first == std::string_view::npos || line[first] == '#') continue;
    out.emplace_back(line.substr(first));
  }
  return out;
}

std::uint64_t pool_seed(const std::string& profile, const std::string& type) {
  return derive_seed(hash_tag(profile), {hash_tag(type)});
}

}  // namespace

SiteProfile parse_profile(std::string_view config_text, std::string_view origin,
                          const FileReader& read) {
  ConfigDocument doc = ConfigDocument::parse(config_text, std::string(origin));
  doc.allow_keys("", {"name", "phi_density", "templates"});
  for (const auto& section : doc.section_names()) {
    if (section.empty() || section == "pools") continue;
    if (section.rfind("format.", 0) != 0) {
      fail(ErrorCode::kParse, std::string(origin) + ": unknown section [" + section + "]");
    }
    doc.allow_keys(section, {"patterns", "weights", "count", "year_min", "year_max"});
  }

  SiteProfile p;
  const ConfigValue* name = doc.find("", "name");
  if (!name) fail(ErrorCode::kParse, std::string(origin) + ": missing 'name'");
  p.name = name->as_string();
  if (const ConfigValue* d = doc.find("", "phi_density")) p.phi_density = d->as_double();
  std::string templates_file = "templates.txt";
  if (const ConfigValue* t = doc.find("", "templates")) templates_file = t->as_string();

  for (const auto& line : template_lines(read(templates_file))) {
    try {
      p.templates.push_back(parse_template(line));
    } catch (const Error& e) {
      fail(e.code(), templates_file + ": " + e.what());
    }
  }

  std::set<std::string> slot_types;
  for (const auto& t : p.templates) slot_types.insert(t.slots.begin(), t.slots.end());

  std::map<std::string, std::size_t> counts;
  for (const auto& section : doc.section_names()) {
    if (section.rfind("format.", 0) != 0) continue;
    std::string type = section.substr(7);
    if (!taxonomy().is_generator_backed(type)) {
      fail(ErrorCode::kParse, std::string(origin) + ": [" + section + "] names a type without a generator");
    }
    GeneratorSpec spec = default_generator_spec(type);
    if (const ConfigValue* v = doc.find(section, "patterns")) {
      spec.patterns = v->as_string_list();
      spec.weights.assign(spec.patterns.size(), 1.0);
    }
    if (const ConfigValue* v = doc.find(section, "weights")) spec.weights = v->as_double_list();
    if (const ConfigValue* v = doc.find(section, "year_min")) spec.years.first = static_cast<int>(v->as_int());
    if (const ConfigValue* v = doc.find(section, "year_max")) spec.years.last = static_cast<int>(v->as_int());
    if (const ConfigValue* v = doc.find(section, "count")) {
      if (v->as_int() < 1) fail(ErrorCode::kParse, std::string(origin) + ": [" + section + "] count must be positive");
      counts[type] = static_cast<std::size_t>(v->as_int());
    }
    p.format_preferences[type] = std::move(spec);
  }

  for (const auto& type : slot_types) {
    if (taxonomy().is_generator_backed(type)) {
      auto it = p.format_preferences.find(type);
      if (it == p.format_preferences.end()) {
        it = p.format_preferences.emplace(type, default_generator_spec(type)).first;
      }
      std::size_t count = counts.count(type) ? counts[type] : kDefaultProfilePoolSize;
      p.entity_pools.emplace(type, generate_identifiers(it->second, count, pool_seed(p.name, type)));
    } else {
      std::string file = type + ".txt";
      if (const ConfigValue* v = doc.find("pools", type)) file = v->as_string();
      p.entity_pools.emplace(type, parse_lexicon(read(file), type));
    }
  }
  if (const auto* pools = doc.section("pools")) {
    for (const auto& [type, _] : *pools) {
      if (!slot_types.count(type)) {
        fail(ErrorCode::kParse, std::string(origin) + ": pool for " + type + " is not used by any template");
      }
    }
  }
  p.validate();
  return p;
}

SiteProfile load_profile(const std::filesystem::path& profile_file) {
  const std::filesystem::path base = profile_file.parent_path();
  return parse_profile(read_text_file(profile_file), profile_file.string(),
                       [&](const std::string& rel) { return read_text_file(base / rel); });
}

SiteProfile builtin_profile(std::string_view name) {
  std::string dir;
  if (name == "SiteA") dir = "profiles/site_a/";
  else if (name == "SiteB") dir = "profiles/site_b/";
  else fail(ErrorCode::kInvalidArgument, "no built-in profile named '" + std::string(name) + "' (expected SiteA or SiteB)");
  return parse_profile(require_builtin_file(dir + "profile.toml"), dir + "profile.toml",
                       [&](const std::string& rel) { return std::string(require_builtin_file(dir + rel)); });
}

std::pair<SiteProfile, SiteProfile> builtin_profiles() {
  return {builtin_profile("SiteA"), builtin_profile("SiteB")};
}

Corpus generate_corpus(const SiteProfile& profile, std::size_t n_documents,
                       SentenceRange sentences, std::uint64_t seed, std::size_t jobs) {
  profile.validate();
  if (n_documents == 0) fail(ErrorCode::kInvalidArgument, "n_documents must be at least 1");
  if (sentences.min == 0 || sentences.min > sentences.max) {
    fail(ErrorCode::kInvalidArgument, "sentence range must satisfy 1 <= min <= max");
  }

  std::vector<const SentenceTemplate*> phi_templates;
  std::vector<const SentenceTemplate*> plain_templates;
  std::size_t slot_total = 0;
  for (const auto& t : profile.templates) {
    if (t.slots.empty()) {
      plain_templates.push_back(&t);
      continue;
    }
    for (const auto& type : t.slots) {
      auto it = profile.entity_pools.find(type);
      if (it == profile.entity_pools.end() || it->second.empty()) {
        fail(ErrorCode::kDomain, "profile " + profile.name + ": no " + type + " entries for template '" + t.text + "'");
      }
    }
    phi_templates.push_back(&t);
    slot_total += t.slots.size();
  }
  // A PHI template is drawn with probability q, so the expected span count
  // per sentence is q * mean_slots = phi_density (capped at q = 1).
  const double mean_slots = static_cast<double>(slot_total) / static_cast<double>(phi_templates.size());
  const double q = plain_templates.empty() ? 1.0 : std::min(1.0, profile.phi_density / mean_slots);

  Corpus corpus;
  corpus.documents.resize(n_documents);
  parallel_for(n_documents, jobs, [&](std::size_t d) {
    RandomStream rng(derive_seed(seed, {d}));
    Document& doc = corpus.documents[d];
    char id[32];
    std::snprintf(id, sizeof id, "-%04zu", d + 1);
    doc.id = profile.name + id;
    const std::size_t n = static_cast<std::size_t>(rng.between(sentences.min, sentences.max));
    for (std::size_t s = 0; s < n; ++s) {
      const bool with_phi = rng.uniform() < q;
      const auto& pool = with_phi ? phi_templates : plain_templates;
      const SentenceTemplate& t = *pool[rng.below(pool.size())];
      Sentence sentence;
      std::size_t slot = 0;
      for (const auto& tok : t.tokens) {
        if (slot < t.slots.size() && tok.size() == t.slots[slot].size() + 2 && tok.front() == '<' &&
            tok.compare(1, t.slots[slot].size(), t.slots[slot]) == 0) {
          const std::string& type = t.slots[slot++];
          const std::string entity = sample_entity(profile.entity_pools.at(type), rng);
          bool first = true;
          std::size_t pos = 0;
          while (pos < entity.size()) {
            std::size_t sp = entity.find(' ', pos);
            std::string part = entity.substr(pos, sp == std::string::npos ? std::string::npos : sp - pos);
            pos = sp == std::string::npos ? entity.size() : sp + 1;
            sentence.tokens.push_back({std::move(part), first ? Label::begin(type) : Label::inside(type)});
            first = false;
          }
        } else {
          sentence.tokens.push_back({tok, Label::outside()});
        }
      }
      doc.sentences.push_back(std::move(sentence));
    }
  });
  return corpus;
}

double template_overlap(const SiteProfile& a, const SiteProfile& b) {
  std::set<std::string> ta, tb;
  for (const auto& t : a.templates) ta.insert(t.text);
  for (const auto& t : b.templates) tb.insert(t.text);
  std::size_t shared = 0;
  for (const auto& t : ta) shared += tb.count(t);
  std::size_t denom = std::max(ta.size(), tb.size());
  return denom == 0 ? 0.0 : static_cast<double>(shared) / static_cast<double>(denom);
}

LexiconRegistry builtin_lexicon_registry(std::uint64_t seed) {
  std::vector<Lexicon> lexicons;
  for (const auto& type : taxonomy().fine_types()) {
    if (taxonomy().is_generator_backed(type)) {
      lexicons.push_back(generate_identifiers(default_generator_spec(type), default_generated_count(type),
                                              derive_seed(seed, {hash_tag(type)})));
    } else if (auto text = builtin_file("lexicons/" + type + ".txt")) {
      lexicons.push_back(parse_lexicon(*text, type));
    }
  }
  return LexiconRegistry(std::move(lexicons));
}

SynonymProvider builtin_clinical_synonyms() {
  return parse_synonym_tsv(require_builtin_file("synonyms/clinical.tsv"), "synonyms/clinical.tsv");
}

}  // namespace phicon
