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

#include "augment.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <set>

#include "errors.hpp"
#include "json.hpp"
#include "parallel.hpp"

namespace phicon {

void AugmentConfig::validate() const {
  auto rate_ok = [](double r) { return r >= 0.0 && r <= 1.0; };
  if (!rate_ok(sr_rate)) fail(ErrorCode::kInvalidArgument, "sr_rate must lie in [0, 1]");
  if (!rate_ok(ri_rate)) fail(ErrorCode::kInvalidArgument, "ri_rate must lie in [0, 1]");
}

std::string_view stage_name(AugmentStage stage) {
  switch (stage) {
    case AugmentStage::kPhi: return "PHI";
    case AugmentStage::kSr: return "SR";
    case AugmentStage::kRi: return "RI";
  }
  return "PHI";
}

namespace {

std::vector<std::string> split_spaces(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t sp = text.find(' ', start);
    std::string part = text.substr(start, sp == std::string::npos ? std::string::npos : sp - start);
    if (!part.empty()) out.push_back(std::move(part));
    if (sp == std::string::npos) break;
    start = sp + 1;
  }
  return out;
}

bool starts_upper(const std::string& s) { return !s.empty() && s[0] >= 'A' && s[0] <= 'Z'; }

void capitalize(std::string& s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
}

std::size_t edit_count(double rate, std::size_t base, std::size_t available) {
  auto n = static_cast<std::size_t>(std::max<long>(1, std::lround(rate * static_cast<double>(base))));
  return std::min(n, available);
}

}  // namespace

bool has_phi(const Sentence& sentence) {
  return std::any_of(sentence.tokens.begin(), sentence.tokens.end(),
                     [](const Token& t) { return t.label.is_phi(); });
}

Granularity detect_granularity(const Corpus& corpus) {
  const PhiTaxonomy& tax = taxonomy();
  for (const auto& doc : corpus.documents) {
    for (const auto& s : doc.sentences) {
      for (const auto& t : s.tokens) {
        if (t.label.is_phi() && tax.is_coarse(t.label.type) && !tax.is_fine(t.label.type)) {
          return Granularity::kCoarse;
        }
      }
    }
  }
  return Granularity::kFine;
}

// ---------------------------------------------------------------------------
// Stages
// ---------------------------------------------------------------------------

PhiAugmentResult phi_augment(const Sentence& sentence, const LexiconRegistry& registry,
                             RandomStream& rng, Granularity granularity) {
  auto spans = extract_entities(sentence);
  PhiAugmentResult result;
  if (spans.empty()) {
    result.sentence = sentence;
    return result;
  }

  // Resolve everything before touching the sentence: no partial output.
  std::vector<std::shared_ptr<const Lexicon>> lexicons;
  lexicons.reserve(spans.size());
  for (const auto& span : spans) lexicons.push_back(registry.resolve(span.phi_type, granularity));

  std::size_t cursor = 0;
  for (std::size_t k = 0; k < spans.size(); ++k) {
    const EntitySpan& span = spans[k];
    for (; cursor < span.start; ++cursor) result.sentence.tokens.push_back(sentence.tokens[cursor]);

    std::string surface = sample_entity(*lexicons[k], rng, span.surface);
    auto words = split_spaces(surface);
    EntitySpan placed;
    placed.start = result.sentence.tokens.size();
    placed.phi_type = span.phi_type;
    placed.surface = surface;
    for (std::size_t w = 0; w < words.size(); ++w) {
      Label label = w == 0 ? Label::begin(span.phi_type) : Label::inside(span.phi_type);
      result.sentence.tokens.push_back(Token{std::move(words[w]), std::move(label)});
    }
    placed.end = result.sentence.tokens.size();
    result.replacements.push_back(Replacement{std::move(placed), span.surface, std::move(surface)});
    cursor = span.end;
  }
  for (; cursor < sentence.tokens.size(); ++cursor) {
    result.sentence.tokens.push_back(sentence.tokens[cursor]);
  }
  return result;
}

Sentence synonym_replace(const Sentence& sentence, const SynonymProvider& provider,
                         double sr_rate, RandomStream& rng) {
  struct Candidate {
    std::size_t index;
    std::vector<std::string> synonyms;
  };
  std::vector<Candidate> eligible;
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    const Token& t = sentence.tokens[i];
    if (!t.label.is_outside()) continue;
    auto pos = provider.unambiguous_pos(t.text);
    if (!pos) continue;
    auto syns = provider.lookup_synonyms(t.text, *pos);
    if (syns.empty()) continue;
    eligible.push_back({i, std::move(syns)});
  }
  if (eligible.empty()) return sentence;

  std::size_t n = edit_count(sr_rate, eligible.size(), eligible.size());
  std::map<std::size_t, std::string> replacement;
  for (std::size_t pick : rng.choose(eligible.size(), n)) {
    const Candidate& c = eligible[pick];
    replacement[c.index] = c.synonyms[rng.below(c.synonyms.size())];
  }

  Sentence out;
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    auto it = replacement.find(i);
    if (it == replacement.end()) {
      out.tokens.push_back(sentence.tokens[i]);
      continue;
    }
    auto words = split_spaces(it->second);
    if (starts_upper(sentence.tokens[i].text)) capitalize(words.front());
    for (auto& w : words) out.tokens.push_back(Token{std::move(w), Label::outside()});
  }
  return out;
}

Sentence random_insert(const Sentence& sentence, const SynonymProvider& provider, double ri_rate,
                       RandomStream& rng) {
  struct Anchor {
    std::size_t index;
    PosTag pos;
  };
  std::vector<Anchor> anchors;
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    const Token& t = sentence.tokens[i];
    if (!t.label.is_outside()) continue;
    auto pos = provider.unambiguous_pos(t.text);
    if (pos && *pos != PosTag::kAdverb) anchors.push_back({i, *pos});
  }
  if (anchors.empty()) return sentence;

  std::size_t n = edit_count(ri_rate, sentence.tokens.size(), anchors.size());
  std::map<std::size_t, std::string> insertion;
  for (std::size_t pick : rng.choose(anchors.size(), n)) {
    const Anchor& a = anchors[pick];
    PosTag wanted = a.pos == PosTag::kNoun ? PosTag::kAdjective : PosTag::kAdverb;
    const auto& pool = provider.pool(wanted);
    if (pool.empty()) {
      fail(ErrorCode::kDomain, std::string("random insertion needs the ") +
                                   (wanted == PosTag::kAdverb ? "adverb" : "adjective") +
                                   " pool, which is empty");
    }
    insertion[a.index] = pool[rng.below(pool.size())];
  }

  Sentence out;
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    if (auto it = insertion.find(i); it != insertion.end()) {
      for (auto& w : split_spaces(it->second)) out.tokens.push_back(Token{std::move(w), Label::outside()});
    }
    out.tokens.push_back(sentence.tokens[i]);
  }
  return out;
}

std::optional<SentenceAugmentation> augment_sentence(const Sentence& sentence,
                                                     const LexiconRegistry& registry,
                                                     const SynonymProvider& provider,
                                                     const AugmentConfig& config,
                                                     RandomStream& rng, Granularity granularity) {
  if (!has_phi(sentence)) {
    fail(ErrorCode::kInvalidArgument, "augment_sentence expects a sentence with PHI");
  }
  SentenceAugmentation out;
  out.sentence = sentence;
  if (config.enable_phi) {
    auto phi = phi_augment(out.sentence, registry, rng, granularity);
    if (phi.sentence != out.sentence) out.applied.insert(AugmentStage::kPhi);
    out.sentence = std::move(phi.sentence);
    out.replacements = std::move(phi.replacements);
  }
  if (config.enable_sr) {
    Sentence next = synonym_replace(out.sentence, provider, config.sr_rate, rng);
    if (next != out.sentence) out.applied.insert(AugmentStage::kSr);
    out.sentence = std::move(next);
  }
  if (config.enable_ri) {
    Sentence next = random_insert(out.sentence, provider, config.ri_rate, rng);
    if (next != out.sentence) out.applied.insert(AugmentStage::kRi);
    out.sentence = std::move(next);
  }
  // Context edits shift token positions; re-anchor the recorded spans. Span
  // count and order are unchanged by SR and RI.
  if (!out.replacements.empty() &&
      (out.applied.count(AugmentStage::kSr) || out.applied.count(AugmentStage::kRi))) {
    auto spans = extract_entities(out.sentence);
    for (std::size_t k = 0; k < out.replacements.size(); ++k) {
      out.replacements[k].span.start = spans[k].start;
      out.replacements[k].span.end = spans[k].end;
    }
  }
  if (config.drop_unchanged && out.sentence == sentence) return std::nullopt;
  return out;
}

std::uint64_t sentence_seed(std::uint64_t master_seed, unsigned run_index, std::size_t doc_index,
                            std::size_t sentence_index) {
  return derive_seed(master_seed, {run_index, doc_index, sentence_index});
}

// ---------------------------------------------------------------------------
// Corpus level
// ---------------------------------------------------------------------------

AugmentResult augment_corpus(const Corpus& corpus, const LexiconRegistry& registry,
                             const SynonymProvider& provider, const AugmentConfig& config,
                             std::size_t jobs) {
  config.validate();
  AugmentResult result;
  result.corpus = corpus;
  if (config.alpha == 0) return result;

  std::set<std::string, std::less<>> ids;
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    const Document& doc = corpus.documents[d];
    ids.insert(doc.id);
    for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
      if (auto v = validate_bio(doc.sentences[s]); !v.empty()) {
        fail(ErrorCode::kDomain, "document '" + doc.id + "' sentence " + std::to_string(s) +
                                     ": invalid BIO at token " + std::to_string(v.front().position));
      }
    }
  }
  auto aug_id = [](const std::string& id, unsigned run) { return id + "#aug" + std::to_string(run); };
  for (unsigned run = 1; run <= config.alpha; ++run) {
    for (const auto& doc : corpus.documents) {
      if (ids.count(aug_id(doc.id, run))) {
        fail(ErrorCode::kDomain, "augmented id '" + aug_id(doc.id, run) + "' collides with an input document");
      }
    }
  }

  const Granularity granularity = detect_granularity(corpus);
  const std::size_t n_docs = corpus.documents.size();
  const std::size_t n_items = n_docs * config.alpha;

  struct Item {
    Document doc;
    std::vector<AugmentRecord> records;
  };
  std::vector<Item> items(n_items);

  parallel_for(n_items, jobs, [&](std::size_t item) {
    const unsigned run = static_cast<unsigned>(item / n_docs) + 1;
    const std::size_t d = item % n_docs;
    const Document& src = corpus.documents[d];
    Item& out = items[item];
    out.doc.id = aug_id(src.id, run);
    for (std::size_t s = 0; s < src.sentences.size(); ++s) {
      const Sentence& sentence = src.sentences[s];
      if (!has_phi(sentence)) {
        if (config.keep_context_sentences) out.doc.sentences.push_back(sentence);
        continue;
      }
      RandomStream rng(sentence_seed(config.master_seed, run, d, s));
      auto aug = augment_sentence(sentence, registry, provider, config, rng, granularity);
      if (!aug) continue;
      out.records.push_back(AugmentRecord{src.id, s, run, aug->applied, std::move(aug->replacements)});
      out.doc.sentences.push_back(std::move(aug->sentence));
    }
  });

  for (auto& item : items) {
    if (item.records.empty()) continue;  // nothing augmented in this copy
    result.corpus.documents.push_back(std::move(item.doc));
    for (auto& r : item.records) result.records.push_back(std::move(r));
  }
  return result;
}

AugmentPlan plan_augmentation(const Corpus& corpus, const AugmentConfig& config) {
  AugmentPlan plan;
  plan.documents = corpus.documents.size();
  for (const auto& doc : corpus.documents) {
    for (const auto& s : doc.sentences) {
      ++plan.sentences;
      if (has_phi(s)) ++plan.eligible_sentences;
    }
  }
  std::size_t per_run = config.keep_context_sentences ? plan.sentences : plan.eligible_sentences;
  plan.max_augmented_sentences = per_run * config.alpha;
  return plan;
}

std::string format_records_jsonl(const std::vector<AugmentRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["doc_id"] = r.doc_id;
    j["sentence_index"] = r.sentence_index;
    j["run_index"] = r.run_index;
    j["applied"] = nlohmann::ordered_json::array();
    for (AugmentStage s : r.applied) j["applied"].push_back(std::string(stage_name(s)));
    j["replacements"] = nlohmann::ordered_json::array();
    for (const auto& rep : r.replacements) {
      nlohmann::ordered_json x;
      x["start"] = rep.span.start;
      x["end"] = rep.span.end;
      x["type"] = rep.span.phi_type;
      x["old"] = rep.old_surface;
      x["new"] = rep.new_surface;
      j["replacements"].push_back(std::move(x));
    }
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace phicon
