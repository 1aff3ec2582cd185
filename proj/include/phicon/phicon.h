/* Copyright 2026 The Phicon Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the phicon library.
 *
 * Conventions:
 *   - Every fallible function returns phicon_status. On failure, output
 *     parameters are left untouched and phicon_last_error() describes the
 *     failure on the calling thread until the next failing call.
 *   - Objects are opaque handles released with their *_free function.
 *     Free functions accept NULL.
 *   - Strings and arrays returned through `char**`, `double**` or `char***`
 *     parameters are owned by the caller and released with phicon_free or
 *     phicon_string_list_free.
 *   - Handles are immutable after construction except where noted, so they
 *     can be shared across threads.
 */

#ifndef PHICON_PHICON_H_
#define PHICON_PHICON_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(PHICON_BUILDING_LIBRARY)
#define PHICON_API __declspec(dllexport)
#else
#define PHICON_API __declspec(dllimport)
#endif
#else
#define PHICON_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum phicon_status {
  PHICON_OK = 0,
  PHICON_INVALID_ARGUMENT = 1,
  PHICON_IO = 2,
  PHICON_PARSE = 3,
  PHICON_VERSION = 4,
  PHICON_EXHAUSTED = 5,
  PHICON_RESOLUTION = 6,
  PHICON_DOMAIN = 7,
  PHICON_INTERNAL = 8
} phicon_status;

typedef struct phicon_corpus phicon_corpus;
typedef struct phicon_registry phicon_registry;
typedef struct phicon_synonyms phicon_synonyms;
typedef struct phicon_model phicon_model;
typedef struct phicon_profile phicon_profile;
typedef struct phicon_config phicon_config;

/* ---- Errors and memory ------------------------------------------------ */

PHICON_API const char* phicon_version(void);
PHICON_API const char* phicon_status_name(phicon_status status);
/* Message of the last failure on this thread; "" when none. */
PHICON_API const char* phicon_last_error(void);

PHICON_API void phicon_free(void* memory);
PHICON_API void phicon_string_list_free(char** items, size_t count);

/* ---- Corpus ----------------------------------------------------------- */

/* `repair` rewrites a dangling I-X to B-X instead of failing. */
PHICON_API phicon_status phicon_corpus_parse(const char* text, size_t length, int repair,
                                             phicon_corpus** out);
PHICON_API phicon_status phicon_corpus_read(const char* path, int repair, phicon_corpus** out);
PHICON_API phicon_status phicon_corpus_write(const phicon_corpus* corpus, const char* path);
PHICON_API phicon_status phicon_corpus_serialize(const phicon_corpus* corpus, char** out);
PHICON_API void phicon_corpus_free(phicon_corpus* corpus);

PHICON_API phicon_status phicon_corpus_counts(const phicon_corpus* corpus, size_t* documents,
                                              size_t* sentences, size_t* tokens);
/* Note count, average tokens and PHI spans per note, spans per category. */
PHICON_API phicon_status phicon_corpus_stats(const phicon_corpus* corpus, char** text);

/* Note-level split; `ratios` holds train, dev and test weights. */
PHICON_API phicon_status phicon_corpus_split(const phicon_corpus* corpus, const double ratios[3],
                                             uint64_t seed, phicon_corpus** train,
                                             phicon_corpus** dev, phicon_corpus** test);
PHICON_API phicon_status phicon_corpus_map_coarse(const phicon_corpus* corpus,
                                                  phicon_corpus** out);
/* Relabels spans of types with fewer than `threshold` spans to O. */
PHICON_API phicon_status phicon_corpus_filter_rare(const phicon_corpus* corpus, size_t threshold,
                                                   phicon_corpus** out);

/* ---- Lexicons --------------------------------------------------------- */

/* An identifier generator. NULL `patterns` selects the type's defaults;
 * NULL `weights` means equal weights, otherwise it holds `pattern_count`
 * entries and requires explicit patterns. `count` 0 selects the type's
 * default pool size. */
typedef struct phicon_generator {
  const char* phi_type;
  const char* const* patterns;
  size_t pattern_count;
  const double* weights;
  size_t count;
  int year_first;
  int year_last;
  uint64_t seed;
} phicon_generator;

PHICON_API void phicon_generator_init(phicon_generator* generator, const char* phi_type);

/* One generated entry per line. */
PHICON_API phicon_status phicon_generate_lexicon(const phicon_generator* generator, char** text);

/* Name and location lexicons shipped with the library plus generated
 * identifier lexicons. */
PHICON_API phicon_status phicon_registry_builtin(uint64_t seed, phicon_registry** out);
/* "<Type>.txt" files of `directory`. Generator-backed types without a file
 * are generated with default patterns from `seed`. */
PHICON_API phicon_status phicon_registry_load_dir(const char* directory, uint64_t seed,
                                                  phicon_registry** out);
/* Replaces the lexicon of the generator's type. Mutates `registry`. */
PHICON_API phicon_status phicon_registry_set_generated(phicon_registry* registry,
                                                       const phicon_generator* generator);
/* Registered fine types, one per line. */
PHICON_API phicon_status phicon_registry_types(const phicon_registry* registry, char** text);
PHICON_API void phicon_registry_free(phicon_registry* registry);

/* ---- Synonyms --------------------------------------------------------- */

PHICON_API phicon_status phicon_synonyms_builtin(phicon_synonyms** out);
/* Directory holding WordNet index.* and data.* files. */
PHICON_API phicon_status phicon_synonyms_load_wndb(const char* directory, phicon_synonyms** out);
/* Lines of "lemma<TAB>pos<TAB>syn1,syn2". */
PHICON_API phicon_status phicon_synonyms_load_tsv(const char* path, phicon_synonyms** out);
PHICON_API void phicon_synonyms_free(phicon_synonyms* synonyms);

/* ---- Augmentation ----------------------------------------------------- */

typedef struct phicon_augment_options {
  unsigned alpha;
  double sr_rate;
  double ri_rate;
  int enable_phi;
  int enable_sr;
  int enable_ri;
  uint64_t seed;
  int drop_unchanged;
  int keep_context_sentences;
} phicon_augment_options;

PHICON_API void phicon_augment_options_init(phicon_augment_options* options);

typedef struct phicon_augment_plan {
  size_t documents;
  size_t sentences;
  size_t eligible_sentences;
  size_t max_augmented_sentences;
} phicon_augment_plan;

PHICON_API phicon_status phicon_augment_plan_counts(const phicon_corpus* corpus,
                                                    const phicon_augment_options* options,
                                                    phicon_augment_plan* plan);

/* The original corpus followed by alpha augmented copies. `records` (may be
 * NULL) receives one JSON object per augmented sentence. Output does not
 * depend on `jobs`. */
PHICON_API phicon_status phicon_augment(const phicon_corpus* corpus,
                                        const phicon_registry* registry,
                                        const phicon_synonyms* synonyms,
                                        const phicon_augment_options* options, size_t jobs,
                                        phicon_corpus** out, char** records);

/* ---- Synthetic sites -------------------------------------------------- */

/* "SiteA" or "SiteB". */
PHICON_API phicon_status phicon_profile_builtin(const char* name, phicon_profile** out);
PHICON_API phicon_status phicon_profile_load(const char* path, phicon_profile** out);
PHICON_API const char* phicon_profile_name(const phicon_profile* profile);
PHICON_API void phicon_profile_free(phicon_profile* profile);

/* Sentence counts per document are drawn from [min_sentences, max_sentences]. */
PHICON_API phicon_status phicon_synthesize(const phicon_profile* profile, size_t documents,
                                           size_t min_sentences, size_t max_sentences,
                                           uint64_t seed, size_t jobs, phicon_corpus** out);

/* ---- Tagger ----------------------------------------------------------- */

PHICON_API phicon_status phicon_train(const phicon_corpus* corpus, size_t epochs, uint64_t seed,
                                      phicon_model** out);
PHICON_API phicon_status phicon_model_save(const phicon_model* model, const char* path);
PHICON_API phicon_status phicon_model_load(const char* path, phicon_model** out);
PHICON_API void phicon_model_free(phicon_model* model);

/* Copy of `corpus` with predicted labels. */
PHICON_API phicon_status phicon_predict(const phicon_model* model, const phicon_corpus* corpus,
                                        size_t jobs, phicon_corpus** out);

/* ---- Evaluation ------------------------------------------------------- */

typedef struct phicon_scores {
  double micro_f1;
  double precision;
  double recall;
  size_t tp;
  size_t fp;
  size_t fn;
  size_t tn;
} phicon_scores;

/* Binary token scores of `predicted` against `gold`; both must hold the same
 * tokens. `report` (may be NULL) receives the text report with per-category
 * scores. */
PHICON_API phicon_status phicon_evaluate(const phicon_corpus* gold,
                                         const phicon_corpus* predicted, phicon_scores* scores,
                                         char** report);

typedef struct phicon_experiment_options {
  size_t n_seeds;
  size_t epochs;
  uint64_t seed;
  size_t jobs;
  const char* setting; /* display name; may be NULL */
} phicon_experiment_options;

PHICON_API void phicon_experiment_options_init(phicon_experiment_options* options);

/* Arms are "baseline", "phi_only", "context_only" or "phicon"; `base` gives
 * alpha, rates and the augmentation seed. One run per training fraction.
 * `table` and `records` may be NULL. */
PHICON_API phicon_status phicon_cross_eval(const phicon_corpus* train, const phicon_corpus* test,
                                           const char* const* arms, size_t arm_count,
                                           const double* fractions, size_t fraction_count,
                                           const phicon_registry* registry,
                                           const phicon_synonyms* synonyms,
                                           const phicon_augment_options* base,
                                           const phicon_experiment_options* options,
                                           char** table, char** records);

/* The four ablation arms at one training fraction. */
PHICON_API phicon_status phicon_ablate(const phicon_corpus* train, const phicon_corpus* test,
                                       double fraction, const phicon_registry* registry,
                                       const phicon_synonyms* synonyms,
                                       const phicon_augment_options* base,
                                       const phicon_experiment_options* options, char** table,
                                       char** records);

/* One single-arm run per alpha scored on `dev`; alpha 0 is the baseline.
 * `log` receives a line per duplicate alpha dropped and the wall time per
 * alpha; the table and records carry no timings. */
PHICON_API phicon_status phicon_sweep(const phicon_corpus* train, const phicon_corpus* dev,
                                      const int* alphas, size_t alpha_count, double fraction,
                                      const phicon_registry* registry,
                                      const phicon_synonyms* synonyms,
                                      const phicon_augment_options* base,
                                      const phicon_experiment_options* options, char** table,
                                      char** records, char** log);

/* ---- Configuration files ---------------------------------------------- */

/* Getters report absence through `*found` (0 or 1) and fail with
 * PHICON_PARSE when the value has the wrong type. Section "" is the top
 * level. */
PHICON_API phicon_status phicon_config_load(const char* path, phicon_config** out);
PHICON_API phicon_status phicon_config_parse(const char* text, const char* origin,
                                             phicon_config** out);
PHICON_API void phicon_config_free(phicon_config* config);

/* Fails with PHICON_PARSE naming the first key outside `allowed`. */
PHICON_API phicon_status phicon_config_allow_keys(const phicon_config* config,
                                                  const char* section,
                                                  const char* const* allowed, size_t count);
PHICON_API phicon_status phicon_config_sections(const phicon_config* config, char*** names,
                                                size_t* count);
PHICON_API phicon_status phicon_config_get_string(const phicon_config* config,
                                                  const char* section, const char* key,
                                                  char** value, int* found);
PHICON_API phicon_status phicon_config_get_double(const phicon_config* config,
                                                  const char* section, const char* key,
                                                  double* value, int* found);
PHICON_API phicon_status phicon_config_get_int(const phicon_config* config, const char* section,
                                               const char* key, int64_t* value, int* found);
PHICON_API phicon_status phicon_config_get_bool(const phicon_config* config, const char* section,
                                                const char* key, int* value, int* found);
PHICON_API phicon_status phicon_config_get_strings(const phicon_config* config,
                                                   const char* section, const char* key,
                                                   char*** values, size_t* count, int* found);
PHICON_API phicon_status phicon_config_get_doubles(const phicon_config* config,
                                                   const char* section, const char* key,
                                                   double** values, size_t* count, int* found);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* PHICON_PHICON_H_ */
