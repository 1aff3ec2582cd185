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

#include "phicon/phicon.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "augment.hpp"
#include "config_text.hpp"
#include "corpus.hpp"
#include "errors.hpp"
#include "evaluate.hpp"
#include "lexicon.hpp"
#include "rng.hpp"
#include "synonyms.hpp"
#include "synthgen.hpp"
#include "tagger.hpp"

struct phicon_corpus {
  phicon::Corpus corpus;
};

struct phicon_registry {
  std::vector<phicon::Lexicon> lexicons;
  phicon::LexiconRegistry registry;

  void rebuild() { registry = phicon::LexiconRegistry(lexicons); }
};

struct phicon_synonyms {
  phicon::SynonymProvider provider;
};

struct phicon_model {
  phicon::TaggerModel model;
};

struct phicon_profile {
  phicon::SiteProfile profile;
};

struct phicon_config {
  phicon::ConfigDocument document;
};

namespace {

thread_local std::string last_error;

phicon_status record(phicon_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs `body`, mapping exceptions onto status codes.
template <typename Fn>
phicon_status guarded(Fn&& body) {
  try {
    body();
    return PHICON_OK;
  } catch (const phicon::Error& e) {
    return record(static_cast<phicon_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return record(PHICON_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(PHICON_INTERNAL, e.what());
  } catch (...) {
    return record(PHICON_INTERNAL, "unknown failure");
  }
}

void require(bool condition, const char* what) {
  if (!condition) phicon::fail(phicon::ErrorCode::kInvalidArgument, what);
}

char* copy_string(std::string_view text) {
  auto* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, text.data(), text.size());
  out[text.size()] = '\0';
  return out;
}

// NULL-terminated; released with phicon_string_list_free.
char** copy_list(const std::vector<std::string>& list) {
  auto** items = static_cast<char**>(std::calloc(list.size() + 1, sizeof(char*)));
  if (items == nullptr) throw std::bad_alloc();
  try {
    for (size_t i = 0; i < list.size(); ++i) items[i] = copy_string(list[i]);
  } catch (...) {
    for (size_t i = 0; i < list.size(); ++i) std::free(items[i]);
    std::free(items);
    throw;
  }
  return items;
}

void store(char** out, std::string_view text) {
  if (out != nullptr) *out = copy_string(text);
}

phicon::AugmentConfig to_config(const phicon_augment_options& o) {
  phicon::AugmentConfig c;
  c.alpha = o.alpha;
  c.sr_rate = o.sr_rate;
  c.ri_rate = o.ri_rate;
  c.enable_phi = o.enable_phi != 0;
  c.enable_sr = o.enable_sr != 0;
  c.enable_ri = o.enable_ri != 0;
  c.master_seed = o.seed;
  c.drop_unchanged = o.drop_unchanged != 0;
  c.keep_context_sentences = o.keep_context_sentences != 0;
  c.validate();
  return c;
}

phicon::ExperimentOptions to_options(const phicon_experiment_options& o, double fraction) {
  require(o.n_seeds >= 1, "n_seeds must be at least 1");
  require(o.epochs >= 1, "epochs must be at least 1");
  phicon::ExperimentOptions e;
  e.train_fraction = fraction;
  e.n_seeds = o.n_seeds;
  e.epochs = o.epochs;
  e.seed = o.seed;
  e.jobs = o.jobs == 0 ? 1 : o.jobs;
  if (o.setting != nullptr) e.setting = o.setting;
  return e;
}

phicon::GeneratorSpec to_spec(const phicon_generator& g) {
  require(g.phi_type != nullptr, "generator type is required");
  phicon::GeneratorSpec spec = phicon::default_generator_spec(g.phi_type);
  if (g.patterns != nullptr) {
    require(g.pattern_count > 0, "pattern list is empty");
    spec.patterns.assign(g.patterns, g.patterns + g.pattern_count);
    spec.weights.clear();
  }
  if (g.weights != nullptr) {
    require(g.patterns != nullptr, "weights need an explicit pattern list");
    spec.weights.assign(g.weights, g.weights + g.pattern_count);
  }
  spec.years = {g.year_first, g.year_last};
  return spec;
}

std::size_t generator_count(const phicon_generator& g) {
  return g.count != 0 ? g.count : phicon::default_generated_count(g.phi_type);
}

const phicon::ConfigValue* lookup(const phicon_config* config, const char* section,
                                  const char* key, int* found) {
  require(config != nullptr && key != nullptr && found != nullptr, "null argument");
  const auto* value = config->document.find(section == nullptr ? "" : section, key);
  *found = value != nullptr ? 1 : 0;
  return value;
}

}  // namespace

extern "C" {

const char* phicon_version(void) { return "1.0.0"; }

const char* phicon_status_name(phicon_status status) {
  switch (status) {
    case PHICON_OK: return "ok";
    case PHICON_INVALID_ARGUMENT: return "invalid argument";
    case PHICON_IO: return "i/o error";
    case PHICON_PARSE: return "parse error";
    case PHICON_VERSION: return "version mismatch";
    case PHICON_EXHAUSTED: return "exhausted";
    case PHICON_RESOLUTION: return "resolution error";
    case PHICON_DOMAIN: return "domain error";
    case PHICON_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* phicon_last_error(void) { return last_error.c_str(); }

void phicon_free(void* memory) { std::free(memory); }

void phicon_string_list_free(char** items, size_t count) {
  if (items == nullptr) return;
  for (size_t i = 0; i < count; ++i) std::free(items[i]);
  std::free(items);
}

// ---- Corpus -----------------------------------------------------------

phicon_status phicon_corpus_parse(const char* text, size_t length, int repair,
                                  phicon_corpus** out) {
  return guarded([&] {
    require(out != nullptr && (text != nullptr || length == 0), "null argument");
    auto c = std::make_unique<phicon_corpus>();
    c->corpus = phicon::parse_conll(std::string_view(text == nullptr ? "" : text, length),
                                    {.repair = repair != 0});
    *out = c.release();
  });
}

phicon_status phicon_corpus_read(const char* path, int repair, phicon_corpus** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    auto c = std::make_unique<phicon_corpus>();
    c->corpus = phicon::read_conll(path, {.repair = repair != 0});
    *out = c.release();
  });
}

phicon_status phicon_corpus_write(const phicon_corpus* corpus, const char* path) {
  return guarded([&] {
    require(corpus != nullptr && path != nullptr, "null argument");
    phicon::write_conll(path, corpus->corpus);
  });
}

phicon_status phicon_corpus_serialize(const phicon_corpus* corpus, char** out) {
  return guarded([&] {
    require(corpus != nullptr && out != nullptr, "null argument");
    store(out, phicon::serialize_conll(corpus->corpus));
  });
}

void phicon_corpus_free(phicon_corpus* corpus) { delete corpus; }

phicon_status phicon_corpus_counts(const phicon_corpus* corpus, size_t* documents,
                                   size_t* sentences, size_t* tokens) {
  return guarded([&] {
    require(corpus != nullptr, "null argument");
    if (documents != nullptr) *documents = corpus->corpus.documents.size();
    if (sentences != nullptr) *sentences = corpus->corpus.sentence_count();
    if (tokens != nullptr) *tokens = corpus->corpus.token_count();
  });
}

phicon_status phicon_corpus_stats(const phicon_corpus* corpus, char** text) {
  return guarded([&] {
    require(corpus != nullptr && text != nullptr, "null argument");
    store(text, phicon::format_stats(phicon::corpus_stats(corpus->corpus)));
  });
}

phicon_status phicon_corpus_split(const phicon_corpus* corpus, const double ratios[3],
                                  uint64_t seed, phicon_corpus** train, phicon_corpus** dev,
                                  phicon_corpus** test) {
  return guarded([&] {
    require(corpus != nullptr && ratios != nullptr && train != nullptr && dev != nullptr &&
                test != nullptr,
            "null argument");
    auto split = phicon::split_corpus(corpus->corpus, {ratios[0], ratios[1], ratios[2]}, seed);
    auto a = std::make_unique<phicon_corpus>(phicon_corpus{std::move(split.train)});
    auto b = std::make_unique<phicon_corpus>(phicon_corpus{std::move(split.dev)});
    auto c = std::make_unique<phicon_corpus>(phicon_corpus{std::move(split.test)});
    *train = a.release();
    *dev = b.release();
    *test = c.release();
  });
}

phicon_status phicon_corpus_map_coarse(const phicon_corpus* corpus, phicon_corpus** out) {
  return guarded([&] {
    require(corpus != nullptr && out != nullptr, "null argument");
    *out = new phicon_corpus{phicon::map_to_coarse(corpus->corpus)};
  });
}

phicon_status phicon_corpus_filter_rare(const phicon_corpus* corpus, size_t threshold,
                                        phicon_corpus** out) {
  return guarded([&] {
    require(corpus != nullptr && out != nullptr, "null argument");
    *out = new phicon_corpus{phicon::filter_rare_types(corpus->corpus, threshold)};
  });
}

// ---- Lexicons ---------------------------------------------------------

void phicon_generator_init(phicon_generator* generator, const char* phi_type) {
  if (generator == nullptr) return;
  const phicon::YearRange years;
  *generator = phicon_generator{phi_type, nullptr, 0, nullptr, 0, years.first, years.last, 0};
}

phicon_status phicon_generate_lexicon(const phicon_generator* generator, char** text) {
  return guarded([&] {
    require(generator != nullptr && text != nullptr, "null argument");
    auto lexicon = phicon::generate_identifiers(to_spec(*generator), generator_count(*generator),
                                                generator->seed);
    std::string joined;
    for (const auto& entry : lexicon.entries()) joined += entry + "\n";
    store(text, joined);
  });
}

phicon_status phicon_registry_builtin(uint64_t seed, phicon_registry** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    auto builtin = phicon::builtin_lexicon_registry(seed);
    auto r = std::make_unique<phicon_registry>();
    for (const auto& type : builtin.types()) r->lexicons.push_back(*builtin.find(type));
    r->rebuild();
    *out = r.release();
  });
}

phicon_status phicon_registry_load_dir(const char* directory, uint64_t seed,
                                       phicon_registry** out) {
  return guarded([&] {
    require(directory != nullptr && out != nullptr, "null argument");
    auto r = std::make_unique<phicon_registry>();
    r->lexicons = phicon::load_lexicon_dir(directory);
    for (const auto& type : phicon::taxonomy().generator_backed()) {
      bool present = false;
      for (const auto& lex : r->lexicons) present = present || lex.phi_type() == type;
      if (present) continue;
      // Same seed rule as the built-in registry.
      r->lexicons.push_back(phicon::generate_identifiers(
          phicon::default_generator_spec(type), phicon::default_generated_count(type),
          phicon::derive_seed(seed, {phicon::hash_tag(type)})));
    }
    r->rebuild();
    *out = r.release();
  });
}

phicon_status phicon_registry_set_generated(phicon_registry* registry,
                                            const phicon_generator* generator) {
  return guarded([&] {
    require(registry != nullptr && generator != nullptr, "null argument");
    auto lexicon = phicon::generate_identifiers(to_spec(*generator), generator_count(*generator),
                                                generator->seed);
    auto& lexicons = registry->lexicons;
    std::erase_if(lexicons, [&](const phicon::Lexicon& l) { return l.phi_type() == lexicon.phi_type(); });
    lexicons.push_back(std::move(lexicon));
    registry->rebuild();
  });
}

phicon_status phicon_registry_types(const phicon_registry* registry, char** text) {
  return guarded([&] {
    require(registry != nullptr && text != nullptr, "null argument");
    std::string joined;
    for (const auto& type : registry->registry.types()) joined += type + "\n";
    store(text, joined);
  });
}

void phicon_registry_free(phicon_registry* registry) { delete registry; }

// ---- Synonyms ---------------------------------------------------------

phicon_status phicon_synonyms_builtin(phicon_synonyms** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = new phicon_synonyms{phicon::builtin_clinical_synonyms()};
  });
}

phicon_status phicon_synonyms_load_wndb(const char* directory, phicon_synonyms** out) {
  return guarded([&] {
    require(directory != nullptr && out != nullptr, "null argument");
    *out = new phicon_synonyms{phicon::load_wndb(directory)};
  });
}

phicon_status phicon_synonyms_load_tsv(const char* path, phicon_synonyms** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new phicon_synonyms{phicon::load_tsv(path)};
  });
}

void phicon_synonyms_free(phicon_synonyms* synonyms) { delete synonyms; }

// ---- Augmentation -----------------------------------------------------

void phicon_augment_options_init(phicon_augment_options* options) {
  if (options == nullptr) return;
  const phicon::AugmentConfig d;
  *options = phicon_augment_options{d.alpha,
                                    d.sr_rate,
                                    d.ri_rate,
                                    d.enable_phi,
                                    d.enable_sr,
                                    d.enable_ri,
                                    d.master_seed,
                                    d.drop_unchanged,
                                    d.keep_context_sentences};
}

phicon_status phicon_augment_plan_counts(const phicon_corpus* corpus,
                                         const phicon_augment_options* options,
                                         phicon_augment_plan* plan) {
  return guarded([&] {
    require(corpus != nullptr && options != nullptr && plan != nullptr, "null argument");
    auto p = phicon::plan_augmentation(corpus->corpus, to_config(*options));
    *plan = phicon_augment_plan{p.documents, p.sentences, p.eligible_sentences,
                                p.max_augmented_sentences};
  });
}

phicon_status phicon_augment(const phicon_corpus* corpus, const phicon_registry* registry,
                             const phicon_synonyms* synonyms,
                             const phicon_augment_options* options, size_t jobs,
                             phicon_corpus** out, char** records) {
  return guarded([&] {
    require(corpus != nullptr && registry != nullptr && synonyms != nullptr &&
                options != nullptr && out != nullptr,
            "null argument");
    auto result = phicon::augment_corpus(corpus->corpus, registry->registry, synonyms->provider,
                                         to_config(*options), jobs == 0 ? 1 : jobs);
    auto c = std::make_unique<phicon_corpus>(phicon_corpus{std::move(result.corpus)});
    if (records != nullptr) *records = copy_string(phicon::format_records_jsonl(result.records));
    *out = c.release();
  });
}

// ---- Synthetic sites --------------------------------------------------

phicon_status phicon_profile_builtin(const char* name, phicon_profile** out) {
  return guarded([&] {
    require(name != nullptr && out != nullptr, "null argument");
    *out = new phicon_profile{phicon::builtin_profile(name)};
  });
}

phicon_status phicon_profile_load(const char* path, phicon_profile** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new phicon_profile{phicon::load_profile(path)};
  });
}

const char* phicon_profile_name(const phicon_profile* profile) {
  return profile == nullptr ? "" : profile->profile.name.c_str();
}

void phicon_profile_free(phicon_profile* profile) { delete profile; }

phicon_status phicon_synthesize(const phicon_profile* profile, size_t documents,
                                size_t min_sentences, size_t max_sentences, uint64_t seed,
                                size_t jobs, phicon_corpus** out) {
  return guarded([&] {
    require(profile != nullptr && out != nullptr, "null argument");
    *out = new phicon_corpus{phicon::generate_corpus(
        profile->profile, documents, {min_sentences, max_sentences}, seed, jobs == 0 ? 1 : jobs)};
  });
}

// ---- Tagger -----------------------------------------------------------

phicon_status phicon_train(const phicon_corpus* corpus, size_t epochs, uint64_t seed,
                           phicon_model** out) {
  return guarded([&] {
    require(corpus != nullptr && out != nullptr, "null argument");
    *out = new phicon_model{phicon::train_tagger(corpus->corpus, epochs, seed)};
  });
}

phicon_status phicon_model_save(const phicon_model* model, const char* path) {
  return guarded([&] {
    require(model != nullptr && path != nullptr, "null argument");
    phicon::save_model(model->model, path);
  });
}

phicon_status phicon_model_load(const char* path, phicon_model** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new phicon_model{phicon::load_model(path)};
  });
}

void phicon_model_free(phicon_model* model) { delete model; }

phicon_status phicon_predict(const phicon_model* model, const phicon_corpus* corpus, size_t jobs,
                             phicon_corpus** out) {
  return guarded([&] {
    require(model != nullptr && corpus != nullptr && out != nullptr, "null argument");
    auto labels = phicon::predict_corpus(model->model, corpus->corpus, jobs == 0 ? 1 : jobs);
    auto c = std::make_unique<phicon_corpus>(*corpus);
    std::size_t k = 0;
    for (auto& doc : c->corpus.documents) {
      for (auto& sentence : doc.sentences) {
        const auto& row = labels[k++];
        for (std::size_t t = 0; t < sentence.tokens.size(); ++t) sentence.tokens[t].label = row[t];
      }
    }
    *out = c.release();
  });
}

// ---- Evaluation -------------------------------------------------------

phicon_status phicon_evaluate(const phicon_corpus* gold, const phicon_corpus* predicted,
                              phicon_scores* scores, char** report) {
  return guarded([&] {
    require(gold != nullptr && predicted != nullptr && scores != nullptr, "null argument");
    const auto& g = gold->corpus.documents;
    const auto& p = predicted->corpus.documents;
    if (g.size() != p.size()) {
      phicon::fail(phicon::ErrorCode::kInvalidArgument,
                   "prediction has " + std::to_string(p.size()) + " documents, gold has " +
                       std::to_string(g.size()));
    }
    phicon::LabelSequences labels;
    for (std::size_t d = 0; d < g.size(); ++d) {
      if (g[d].sentences.size() != p[d].sentences.size()) {
        phicon::fail(phicon::ErrorCode::kInvalidArgument,
                     "document '" + g[d].id + "' has a different sentence count in the prediction");
      }
      for (std::size_t s = 0; s < g[d].sentences.size(); ++s) {
        const auto& gt = g[d].sentences[s].tokens;
        const auto& pt = p[d].sentences[s].tokens;
        std::vector<phicon::Label> row;
        for (std::size_t t = 0; t < pt.size(); ++t) {
          if (t < gt.size() && gt[t].text != pt[t].text) {
            phicon::fail(phicon::ErrorCode::kInvalidArgument,
                         "document '" + g[d].id + "' sentence " + std::to_string(s) +
                             " token " + std::to_string(t) + " differs from gold");
          }
          row.push_back(pt[t].label);
        }
        labels.push_back(std::move(row));
      }
    }
    auto r = phicon::binary_token_f1(gold->corpus, labels);
    *scores = phicon_scores{r.micro_f1,    r.precision,   r.recall,     r.counts.tp,
                            r.counts.fp,   r.counts.fn,   r.counts.tn};
    if (report != nullptr) *report = copy_string(phicon::format_report(r));
  });
}

void phicon_experiment_options_init(phicon_experiment_options* options) {
  if (options == nullptr) return;
  const phicon::ExperimentOptions d;
  *options = phicon_experiment_options{d.n_seeds, d.epochs, d.seed, d.jobs, nullptr};
}

phicon_status phicon_cross_eval(const phicon_corpus* train, const phicon_corpus* test,
                                const char* const* arms, size_t arm_count,
                                const double* fractions, size_t fraction_count,
                                const phicon_registry* registry, const phicon_synonyms* synonyms,
                                const phicon_augment_options* base,
                                const phicon_experiment_options* options, char** table,
                                char** records) {
  return guarded([&] {
    require(train != nullptr && test != nullptr && arms != nullptr && fractions != nullptr &&
                registry != nullptr && synonyms != nullptr && base != nullptr &&
                options != nullptr,
            "null argument");
    require(arm_count > 0, "arm list is empty");
    require(fraction_count > 0, "fraction list is empty");
    const auto config = to_config(*base);
    std::vector<phicon::ArmSpec> specs;
    for (size_t i = 0; i < arm_count; ++i) specs.push_back(phicon::make_arm(arms[i], config));
    const phicon::ExperimentResources resources{&registry->registry, &synonyms->provider};
    std::vector<phicon::ExperimentResult> results;
    for (size_t i = 0; i < fraction_count; ++i) {
      results.push_back(phicon::cross_dataset_eval(train->corpus, test->corpus, specs, resources,
                                                   to_options(*options, fractions[i])));
    }
    auto t = phicon::format_cross_table(results);
    auto r = phicon::format_experiment_jsonl(results);
    store(table, t);
    store(records, r);
  });
}

phicon_status phicon_ablate(const phicon_corpus* train, const phicon_corpus* test,
                            double fraction, const phicon_registry* registry,
                            const phicon_synonyms* synonyms, const phicon_augment_options* base,
                            const phicon_experiment_options* options, char** table,
                            char** records) {
  return guarded([&] {
    require(train != nullptr && test != nullptr && registry != nullptr && synonyms != nullptr &&
                base != nullptr && options != nullptr,
            "null argument");
    const phicon::ExperimentResources resources{&registry->registry, &synonyms->provider};
    auto result = phicon::ablation_run(train->corpus, test->corpus, to_config(*base), resources,
                                       to_options(*options, fraction));
    auto t = phicon::format_ablation_table(result);
    auto r = phicon::format_experiment_jsonl({result});
    store(table, t);
    store(records, r);
  });
}

phicon_status phicon_sweep(const phicon_corpus* train, const phicon_corpus* dev,
                           const int* alphas, size_t alpha_count, double fraction,
                           const phicon_registry* registry, const phicon_synonyms* synonyms,
                           const phicon_augment_options* base,
                           const phicon_experiment_options* options, char** table,
                           char** records, char** log) {
  return guarded([&] {
    require(train != nullptr && dev != nullptr && (alphas != nullptr || alpha_count == 0) &&
                registry != nullptr && synonyms != nullptr && base != nullptr &&
                options != nullptr,
            "null argument");
    const phicon::ExperimentResources resources{&registry->registry, &synonyms->provider};
    std::vector<int> list(alphas, alphas + alpha_count);
    auto sweep = phicon::alpha_sweep(train->corpus, dev->corpus, list, to_config(*base), resources,
                                     to_options(*options, fraction));
    std::string joined;
    for (const auto& w : sweep.warnings) joined += "warning: " + w + "\n";
    joined += phicon::format_sweep_timings(sweep);
    auto t = phicon::format_sweep_table(sweep);
    auto r = phicon::format_sweep_jsonl(sweep);
    store(table, t);
    store(records, r);
    store(log, joined);
  });
}

// ---- Configuration files ----------------------------------------------

phicon_status phicon_config_load(const char* path, phicon_config** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new phicon_config{phicon::ConfigDocument::load(path)};
  });
}

phicon_status phicon_config_parse(const char* text, const char* origin, phicon_config** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "null argument");
    *out = new phicon_config{
        phicon::ConfigDocument::parse(text, origin == nullptr ? "<config>" : origin)};
  });
}

void phicon_config_free(phicon_config* config) { delete config; }

phicon_status phicon_config_allow_keys(const phicon_config* config, const char* section,
                                       const char* const* allowed, size_t count) {
  return guarded([&] {
    require(config != nullptr && (allowed != nullptr || count == 0), "null argument");
    const auto* keys = config->document.section(section == nullptr ? "" : section);
    if (keys == nullptr) return;
    for (const auto& [key, value] : *keys) {
      bool ok = false;
      for (size_t i = 0; i < count && !ok; ++i) ok = key == allowed[i];
      if (!ok) {
        std::string where = section == nullptr || *section == '\0'
                                ? std::string("top level")
                                : "[" + std::string(section) + "]";
        phicon::fail(phicon::ErrorCode::kParse, config->document.origin() + ":" +
                                                    std::to_string(value.line) + ": unknown key '" +
                                                    key + "' in " + where);
      }
    }
  });
}

phicon_status phicon_config_sections(const phicon_config* config, char*** names, size_t* count) {
  return guarded([&] {
    require(config != nullptr && names != nullptr && count != nullptr, "null argument");
    auto list = config->document.section_names();
    *names = copy_list(list);
    *count = list.size();
  });
}

phicon_status phicon_config_get_string(const phicon_config* config, const char* section,
                                       const char* key, char** value, int* found) {
  return guarded([&] {
    require(value != nullptr, "null argument");
    if (const auto* v = lookup(config, section, key, found)) *value = copy_string(v->as_string());
  });
}

phicon_status phicon_config_get_double(const phicon_config* config, const char* section,
                                       const char* key, double* value, int* found) {
  return guarded([&] {
    require(value != nullptr, "null argument");
    if (const auto* v = lookup(config, section, key, found)) *value = v->as_double();
  });
}

phicon_status phicon_config_get_int(const phicon_config* config, const char* section,
                                    const char* key, int64_t* value, int* found) {
  return guarded([&] {
    require(value != nullptr, "null argument");
    if (const auto* v = lookup(config, section, key, found)) *value = v->as_int();
  });
}

phicon_status phicon_config_get_bool(const phicon_config* config, const char* section,
                                     const char* key, int* value, int* found) {
  return guarded([&] {
    require(value != nullptr, "null argument");
    if (const auto* v = lookup(config, section, key, found)) *value = v->as_bool() ? 1 : 0;
  });
}

phicon_status phicon_config_get_strings(const phicon_config* config, const char* section,
                                        const char* key, char*** values, size_t* count,
                                        int* found) {
  return guarded([&] {
    require(values != nullptr && count != nullptr, "null argument");
    const auto* v = lookup(config, section, key, found);
    if (v == nullptr) return;
    auto list = v->as_string_list();
    *values = copy_list(list);
    *count = list.size();
  });
}

phicon_status phicon_config_get_doubles(const phicon_config* config, const char* section,
                                        const char* key, double** values, size_t* count,
                                        int* found) {
  return guarded([&] {
    require(values != nullptr && count != nullptr, "null argument");
    const auto* v = lookup(config, section, key, found);
    if (v == nullptr) return;
    auto list = v->as_double_list();
    auto* items = static_cast<double*>(std::malloc((list.size() + 1) * sizeof(double)));
    if (items == nullptr) throw std::bad_alloc();
    std::copy(list.begin(), list.end(), items);
    *values = items;
    *count = list.size();
  });
}

}  // extern "C"
