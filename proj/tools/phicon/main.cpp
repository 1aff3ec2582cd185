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

// phicon command-line tool.
//
// Every value can come from a flag or from the --config file. A flag given on
// the command line wins over the config file, which wins over the built-in
// default. Relative paths in the config file resolve against the directory
// of that file. Exit status: 0 success, 1 failure inside the library (bad
// input data, I/O), 2 usage error (bad flags, invalid config file).

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "phicon/phicon.h"

namespace {

namespace fs = std::filesystem;

class Failure : public std::runtime_error {
 public:
  Failure(int exit_code, const std::string& message)
      : std::runtime_error(message), exit_code_(exit_code) {}
  int exit_code() const { return exit_code_; }

 private:
  int exit_code_;
};

[[noreturn]] void usage_error(const std::string& message) { throw Failure(2, message); }

void check(phicon_status status) {
  if (status != PHICON_OK) {
    throw Failure(1, std::string(phicon_status_name(status)) + ": " + phicon_last_error());
  }
}

void log(const std::string& message) { std::cerr << "phicon: " << message << "\n"; }

std::string take(char* text) {
  std::string out = text == nullptr ? "" : text;
  phicon_free(text);
  return out;
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Corpus = std::unique_ptr<phicon_corpus, Deleter<phicon_corpus, phicon_corpus_free>>;
using Registry = std::unique_ptr<phicon_registry, Deleter<phicon_registry, phicon_registry_free>>;
using Synonyms = std::unique_ptr<phicon_synonyms, Deleter<phicon_synonyms, phicon_synonyms_free>>;
using Model = std::unique_ptr<phicon_model, Deleter<phicon_model, phicon_model_free>>;
using Profile = std::unique_ptr<phicon_profile, Deleter<phicon_profile, phicon_profile_free>>;
using ConfigHandle = std::unique_ptr<phicon_config, Deleter<phicon_config, phicon_config_free>>;

// ---- Config file -------------------------------------------------------

struct SectionKeys {
  const char* section;
  std::vector<const char*> keys;
};

const std::vector<SectionKeys>& known_sections() {
  static const std::vector<SectionKeys> kSections = {
      {"", {"seed", "jobs"}},
      {"paths",
       {"train", "dev", "test", "lexicon_dir", "wordnet_dir", "synonyms_tsv", "output_dir"}},
      {"augment",
       {"alpha", "sr_rate", "ri_rate", "enable_phi", "enable_sr", "enable_ri", "seed",
        "drop_unchanged", "keep_context_sentences"}},
      {"experiment", {"arms", "fractions", "fraction", "alphas", "n_seeds", "epochs"}},
      {"synth", {"profile", "documents", "min_sentences", "max_sentences"}},
      {"split", {"ratios", "coarse", "min_count"}},
  };
  return kSections;
}

const std::vector<const char*> kFormatKeys = {"patterns", "weights", "count", "year_min",
                                              "year_max", "seed"};
constexpr const char* kFormatPrefix = "format.";

// Read-only view of an optional config file; every getter is empty when no
// file was given.
class RunConfig {
 public:
  RunConfig() = default;

  static RunConfig load(const std::string& path) {
    RunConfig config;
    phicon_config* raw = nullptr;
    if (phicon_config_load(path.c_str(), &raw) != PHICON_OK) {
      usage_error(std::string("config: ") + phicon_last_error());
    }
    config.handle_.reset(raw);
    config.dir_ = fs::absolute(path).parent_path();
    config.validate();
    return config;
  }

  std::optional<std::string> string(const char* section, const char* key) const {
    if (!handle_) return std::nullopt;
    char* value = nullptr;
    int found = 0;
    guard(phicon_config_get_string(handle_.get(), section, key, &value, &found));
    if (!found) return std::nullopt;
    return take(value);
  }

  std::optional<std::string> path(const char* section, const char* key) const {
    auto value = string(section, key);
    if (!value) return std::nullopt;
    fs::path p(*value);
    return (p.is_absolute() ? p : dir_ / p).lexically_normal().string();
  }

  std::optional<double> number(const char* section, const char* key) const {
    if (!handle_) return std::nullopt;
    double value = 0;
    int found = 0;
    guard(phicon_config_get_double(handle_.get(), section, key, &value, &found));
    if (!found) return std::nullopt;
    return value;
  }

  std::optional<std::int64_t> integer(const char* section, const char* key) const {
    if (!handle_) return std::nullopt;
    std::int64_t value = 0;
    int found = 0;
    guard(phicon_config_get_int(handle_.get(), section, key, &value, &found));
    if (!found) return std::nullopt;
    return value;
  }

  std::optional<std::size_t> count(const char* section, const char* key) const {
    auto value = integer(section, key);
    if (!value) return std::nullopt;
    if (*value < 0) usage_error(where(section, key) + " must not be negative");
    return static_cast<std::size_t>(*value);
  }

  std::optional<bool> boolean(const char* section, const char* key) const {
    if (!handle_) return std::nullopt;
    int value = 0;
    int found = 0;
    guard(phicon_config_get_bool(handle_.get(), section, key, &value, &found));
    if (!found) return std::nullopt;
    return value != 0;
  }

  std::optional<std::vector<std::string>> strings(const char* section, const char* key) const {
    if (!handle_) return std::nullopt;
    char** values = nullptr;
    std::size_t n = 0;
    int found = 0;
    guard(phicon_config_get_strings(handle_.get(), section, key, &values, &n, &found));
    if (!found) return std::nullopt;
    std::vector<std::string> out(values, values + n);
    phicon_string_list_free(values, n);
    return out;
  }

  std::optional<std::vector<double>> numbers(const char* section, const char* key) const {
    if (!handle_) return std::nullopt;
    double* values = nullptr;
    std::size_t n = 0;
    int found = 0;
    guard(phicon_config_get_doubles(handle_.get(), section, key, &values, &n, &found));
    if (!found) return std::nullopt;
    std::vector<double> out(values, values + n);
    phicon_free(values);
    return out;
  }

  std::optional<std::vector<int>> integers(const char* section, const char* key) const {
    auto values = numbers(section, key);
    if (!values) return std::nullopt;
    std::vector<int> out;
    for (double v : *values) {
      if (v != std::floor(v)) usage_error(where(section, key) + " must hold integers");
      out.push_back(static_cast<int>(v));
    }
    return out;
  }

  // Fine types with a [format.<Type>] section.
  const std::vector<std::string>& format_types() const { return format_types_; }

 private:
  static std::string where(const char* section, const char* key) {
    return std::string("config: ") + (*section ? std::string(section) + "." : "") + key;
  }

  static void guard(phicon_status status) {
    if (status != PHICON_OK) usage_error(std::string("config: ") + phicon_last_error());
  }

  void validate() {
    char** names = nullptr;
    std::size_t n = 0;
    guard(phicon_config_sections(handle_.get(), &names, &n));
    std::vector<std::string> sections(names, names + n);
    phicon_string_list_free(names, n);

    for (const auto& name : sections) {
      const SectionKeys* known = nullptr;
      for (const auto& s : known_sections()) {
        if (name == s.section) known = &s;
      }
      if (known != nullptr) {
        guard(phicon_config_allow_keys(handle_.get(), known->section, known->keys.data(),
                                       known->keys.size()));
      } else if (name.rfind(kFormatPrefix, 0) == 0) {
        guard(phicon_config_allow_keys(handle_.get(), name.c_str(), kFormatKeys.data(),
                                       kFormatKeys.size()));
        format_types_.push_back(name.substr(std::string(kFormatPrefix).size()));
      } else {
        usage_error("config: unknown section [" + name + "]");
      }
    }

    // Inputs must exist when the file is loaded; output_dir is created on use.
    for (const char* key : {"train", "dev", "test", "lexicon_dir", "wordnet_dir", "synonyms_tsv"}) {
      if (auto p = path("paths", key); p && !fs::exists(*p)) {
        usage_error(where("paths", key) + " '" + *p + "' does not exist");
      }
    }
    if (auto profile = string("synth", "profile");
        profile && *profile != "SiteA" && *profile != "SiteB") {
      auto p = path("synth", "profile");
      if (!fs::exists(*p)) usage_error(where("synth", "profile") + " '" + *p + "' does not exist");
    }
  }

  ConfigHandle handle_;
  fs::path dir_;
  std::vector<std::string> format_types_;
};

// Assigns the config value unless the flag was given.
template <typename T>
void merge(const CLI::Option* flag, T& target, const std::optional<T>& from_config) {
  if (flag->count() == 0 && from_config) target = *from_config;
}

// Required value that may come from the config file instead of a flag.
std::string required(const CLI::Option* flag, std::string value,
                     const std::optional<std::string>& from_config) {
  if (flag->count() == 0 && from_config) value = *from_config;
  if (value.empty()) usage_error(flag->get_name() + " is required");
  return value;
}

// ---- Shared state --------------------------------------------------------

struct Globals {
  std::string config_path;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  CLI::Option* seed_flag = nullptr;
  CLI::Option* jobs_flag = nullptr;
  RunConfig config;

  // --seed, else the section's seed key, else the top-level seed.
  std::uint64_t seed_for(const char* section) const {
    if (seed_flag->count() > 0) return seed;
    if (auto s = config.integer(section, "seed")) return static_cast<std::uint64_t>(*s);
    if (auto s = config.integer("", "seed")) return static_cast<std::uint64_t>(*s);
    return seed;
  }

  std::size_t job_count() const {
    std::size_t n = jobs;
    if (jobs_flag->count() == 0) {
      if (auto j = config.count("", "jobs")) n = *j;
    }
    return n == 0 ? 1 : n;
  }
};

Corpus read_corpus(const std::string& path) {
  phicon_corpus* raw = nullptr;
  check(phicon_corpus_read(path.c_str(), 0, &raw));
  return Corpus(raw);
}

// "-" writes to standard output.
void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure(1, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Failure(1, "write to '" + path + "' failed");
}

void write_corpus(const std::string& path, const phicon_corpus* corpus) {
  char* text = nullptr;
  check(phicon_corpus_serialize(corpus, &text));
  write_text(path, take(text));
}

std::string stem(const std::string& path) { return fs::path(path).stem().string(); }

// ---- Resources -----------------------------------------------------------

struct ResourceFlags {
  std::string lexicon_dir;
  std::string wordnet_dir;
  std::string synonyms_tsv;
  CLI::Option* lexicon_flag = nullptr;
  CLI::Option* wordnet_flag = nullptr;
  CLI::Option* tsv_flag = nullptr;

  void add(CLI::App* sub) {
    lexicon_flag = sub->add_option("--lexicons", lexicon_dir,
                                   "Directory of <Type>.txt lexicons (default: built-in lists)")
                       ->check(CLI::ExistingDirectory);
    wordnet_flag = sub->add_option("--wordnet", wordnet_dir,
                                   "WordNet database directory (index.* and data.* files)")
                       ->check(CLI::ExistingDirectory);
    tsv_flag = sub->add_option("--synonyms-tsv", synonyms_tsv, "Synonym table (lemma, pos, list)")
                   ->check(CLI::ExistingFile);
  }
};

void apply_format_sections(const Globals& g, phicon_registry* registry) {
  for (const auto& type : g.config.format_types()) {
    std::string section = kFormatPrefix + type;
    const char* s = section.c_str();
    phicon_generator gen;
    phicon_generator_init(&gen, type.c_str());
    auto patterns = g.config.strings(s, "patterns").value_or(std::vector<std::string>{});
    auto weights = g.config.numbers(s, "weights");
    std::vector<const char*> pattern_ptrs;
    for (const auto& p : patterns) pattern_ptrs.push_back(p.c_str());
    if (!patterns.empty()) {
      gen.patterns = pattern_ptrs.data();
      gen.pattern_count = pattern_ptrs.size();
    }
    if (weights) {
      if (weights->size() != patterns.size()) {
        usage_error("config: [" + section + "] needs one weight per pattern");
      }
      gen.weights = weights->data();
    }
    gen.count = g.config.count(s, "count").value_or(0);
    if (auto y = g.config.integer(s, "year_min")) gen.year_first = static_cast<int>(*y);
    if (auto y = g.config.integer(s, "year_max")) gen.year_last = static_cast<int>(*y);
    gen.seed = g.seed_for(s);
    check(phicon_registry_set_generated(registry, &gen));
  }
}

Registry load_registry(const Globals& g, const ResourceFlags& f) {
  std::string dir = f.lexicon_dir;
  merge(f.lexicon_flag, dir, g.config.path("paths", "lexicon_dir"));
  phicon_registry* raw = nullptr;
  const std::uint64_t seed = g.seed_for("");
  if (dir.empty()) {
    check(phicon_registry_builtin(seed, &raw));
  } else {
    check(phicon_registry_load_dir(dir.c_str(), seed, &raw));
  }
  Registry registry(raw);
  apply_format_sections(g, registry.get());
  return registry;
}

// WordNet, else a synonym table, else the built-in clinical table.
Synonyms load_synonyms(const Globals& g, const ResourceFlags& f) {
  std::string wordnet = f.wordnet_dir;
  std::string tsv = f.synonyms_tsv;
  merge(f.wordnet_flag, wordnet, g.config.path("paths", "wordnet_dir"));
  merge(f.tsv_flag, tsv, g.config.path("paths", "synonyms_tsv"));
  phicon_synonyms* raw = nullptr;
  if (!wordnet.empty()) {
    check(phicon_synonyms_load_wndb(wordnet.c_str(), &raw));
  } else if (!tsv.empty()) {
    check(phicon_synonyms_load_tsv(tsv.c_str(), &raw));
  } else {
    check(phicon_synonyms_builtin(&raw));
  }
  return Synonyms(raw);
}

// ---- Augmentation settings --------------------------------------------

struct AugmentFlags {
  unsigned alpha = 2;
  double sr_rate = 0.1;
  double ri_rate = 0.05;
  bool no_phi = false;
  bool no_sr = false;
  bool no_ri = false;
  bool keep_unchanged = false;
  bool keep_context = false;
  CLI::Option* alpha_flag = nullptr;
  CLI::Option* sr_flag = nullptr;
  CLI::Option* ri_flag = nullptr;
  CLI::Option* no_phi_flag = nullptr;
  CLI::Option* no_sr_flag = nullptr;
  CLI::Option* no_ri_flag = nullptr;
  CLI::Option* keep_unchanged_flag = nullptr;
  CLI::Option* keep_context_flag = nullptr;

  void add(CLI::App* sub) {
    alpha_flag = sub->add_option("--alpha", alpha, "Augmented copies per sentence")
                     ->capture_default_str();
    sr_flag = sub->add_option("--sr-rate", sr_rate, "Synonym replacement rate")
                  ->check(CLI::Range(0.0, 1.0))
                  ->capture_default_str();
    ri_flag = sub->add_option("--ri-rate", ri_rate, "Random insertion rate")
                  ->check(CLI::Range(0.0, 1.0))
                  ->capture_default_str();
    no_phi_flag = sub->add_flag("--no-phi", no_phi, "Disable PHI replacement");
    no_sr_flag = sub->add_flag("--no-sr", no_sr, "Disable synonym replacement");
    no_ri_flag = sub->add_flag("--no-ri", no_ri, "Disable random insertion");
    keep_unchanged_flag =
        sub->add_flag("--keep-unchanged", keep_unchanged, "Keep augmented copies that equal the source");
    keep_context_flag = sub->add_flag("--keep-context", keep_context,
                                      "Copy PHI-free sentences into augmented documents");
  }

  phicon_augment_options resolve(const Globals& g) const {
    phicon_augment_options o;
    phicon_augment_options_init(&o);
    const RunConfig& c = g.config;
    o.alpha = alpha;
    if (alpha_flag->count() == 0) {
      if (auto a = c.count("augment", "alpha")) o.alpha = static_cast<unsigned>(*a);
    }
    o.sr_rate = sr_rate;
    merge(sr_flag, o.sr_rate, c.number("augment", "sr_rate"));
    o.ri_rate = ri_rate;
    merge(ri_flag, o.ri_rate, c.number("augment", "ri_rate"));
    auto toggle = [&](const CLI::Option* flag, bool flag_value, const char* key, bool fallback) {
      if (flag->count() > 0) return flag_value;
      return c.boolean("augment", key).value_or(fallback);
    };
    o.enable_phi = toggle(no_phi_flag, false, "enable_phi", o.enable_phi != 0);
    o.enable_sr = toggle(no_sr_flag, false, "enable_sr", o.enable_sr != 0);
    o.enable_ri = toggle(no_ri_flag, false, "enable_ri", o.enable_ri != 0);
    o.drop_unchanged = toggle(keep_unchanged_flag, false, "drop_unchanged", o.drop_unchanged != 0);
    o.keep_context_sentences =
        toggle(keep_context_flag, true, "keep_context_sentences", o.keep_context_sentences != 0);
    o.seed = g.seed_for("augment");
    return o;
  }
};

// ---- Experiment settings ----------------------------------------------

struct ExperimentFlags {
  std::size_t n_seeds = 5;
  std::size_t epochs = 5;
  std::string out;
  CLI::Option* seeds_flag = nullptr;
  CLI::Option* epochs_flag = nullptr;
  CLI::Option* out_flag = nullptr;

  void add(CLI::App* sub) {
    seeds_flag = sub->add_option("--seeds", n_seeds, "Runs averaged per arm")
                     ->check(CLI::PositiveNumber)
                     ->capture_default_str();
    epochs_flag = sub->add_option("--epochs", epochs, "Tagger training epochs")
                      ->check(CLI::PositiveNumber)
                      ->capture_default_str();
    out_flag = sub->add_option("--out", out, "Per-run records (JSON lines)");
  }

  phicon_experiment_options resolve(const Globals& g, const std::string& setting) const {
    phicon_experiment_options o;
    phicon_experiment_options_init(&o);
    o.n_seeds = n_seeds;
    merge(seeds_flag, o.n_seeds, g.config.count("experiment", "n_seeds"));
    o.epochs = epochs;
    merge(epochs_flag, o.epochs, g.config.count("experiment", "epochs"));
    if (o.n_seeds == 0 || o.epochs == 0) usage_error("n_seeds and epochs must be positive");
    o.seed = g.seed_for("experiment");
    o.jobs = g.job_count();
    o.setting = setting.c_str();
    return o;
  }

  // --out, else <output_dir>/<command>.jsonl, else nothing.
  std::optional<std::string> records_path(const Globals& g, const std::string& command) const {
    if (out_flag->count() > 0) return out;
    if (auto dir = g.config.path("paths", "output_dir")) {
      fs::create_directories(*dir);
      return (fs::path(*dir) / (command + ".jsonl")).string();
    }
    return std::nullopt;
  }
};

double resolve_fraction(const CLI::Option* flag, double value, const RunConfig& c) {
  merge(flag, value, c.number("experiment", "fraction"));
  if (!(value > 0.0 && value <= 1.0)) usage_error("training fraction must lie in (0, 1]");
  return value;
}

// ---- Subcommands --------------------------------------------------------

struct CorpusIo {
  std::string in;
  CLI::Option* in_flag = nullptr;

  CLI::Option* add(CLI::App* sub, const char* name, const char* description) {
    in_flag = sub->add_option(name, in, description)->check(CLI::ExistingFile);
    return in_flag;
  }
};

void setup_augment(CLI::App& app, Globals& g) {
  auto* sub = app.add_subcommand("augment", "Write the corpus merged with alpha augmented copies");
  struct State {
    CorpusIo io;
    std::string out;
    std::string records;
    bool dry_run = false;
    AugmentFlags aug;
    ResourceFlags res;
  };
  auto s = std::make_shared<State>();
  s->io.add(sub, "--in", "Input corpus (default: paths.train)");
  sub->add_option("--out", s->out, "Output corpus, '-' for standard output");
  sub->add_option("--records", s->records, "Replacement log (JSON lines)");
  sub->add_flag("--dry-run", s->dry_run, "Print planned counts and write nothing");
  s->aug.add(sub);
  s->res.add(sub);
  sub->callback([s, &g] {
    std::string in = required(s->io.in_flag, s->io.in, g.config.path("paths", "train"));
    auto options = s->aug.resolve(g);
    Corpus corpus = read_corpus(in);
    if (s->dry_run) {
      phicon_augment_plan plan;
      check(phicon_augment_plan_counts(corpus.get(), &options, &plan));
      std::printf("documents\t%zu\nsentences\t%zu\neligible_sentences\t%zu\n"
                  "max_augmented_sentences\t%zu\nmax_output_sentences\t%zu\n",
                  plan.documents, plan.sentences, plan.eligible_sentences,
                  plan.max_augmented_sentences, plan.sentences + plan.max_augmented_sentences);
      return;
    }
    if (s->out.empty()) usage_error("--out is required");
    Registry registry = load_registry(g, s->res);
    Synonyms synonyms = load_synonyms(g, s->res);
    phicon_corpus* raw = nullptr;
    char* records = nullptr;
    check(phicon_augment(corpus.get(), registry.get(), synonyms.get(), &options, g.job_count(),
                         &raw, s->records.empty() ? nullptr : &records));
    Corpus result(raw);
    write_corpus(s->out, result.get());
    if (!s->records.empty()) write_text(s->records, take(records));
    std::size_t before = 0;
    std::size_t after = 0;
    check(phicon_corpus_counts(corpus.get(), nullptr, &before, nullptr));
    check(phicon_corpus_counts(result.get(), nullptr, &after, nullptr));
    log("augmented " + std::to_string(before) + " sentences into " + std::to_string(after));
  });
}

void setup_gen_lexicon(CLI::App& app, Globals& g) {
  auto* sub = app.add_subcommand("gen-lexicon", "Generate an identifier lexicon");
  struct State {
    std::string type;
    std::vector<std::string> patterns;
    std::vector<double> weights;
    std::size_t count = 0;
    int year_min = 0;
    int year_max = 0;
    std::string out = "-";
    CLI::Option* patterns_flag = nullptr;
    CLI::Option* weights_flag = nullptr;
    CLI::Option* count_flag = nullptr;
    CLI::Option* year_min_flag = nullptr;
    CLI::Option* year_max_flag = nullptr;
  };
  auto s = std::make_shared<State>();
  sub->add_option("--type", s->type, "Generator-backed PHI type, e.g. Phone")->required();
  s->patterns_flag = sub->add_option("--pattern", s->patterns, "Pattern (repeatable)");
  s->weights_flag = sub->add_option("--weight", s->weights, "Weight per pattern (repeatable)");
  s->count_flag = sub->add_option("--count", s->count, "Entries (default: per-type size)");
  s->year_min_flag = sub->add_option("--year-min", s->year_min, "First year for date fields");
  s->year_max_flag = sub->add_option("--year-max", s->year_max, "Last year for date fields");
  sub->add_option("--out", s->out, "Output file, '-' for standard output")->capture_default_str();
  sub->callback([s, &g] {
    std::string section = kFormatPrefix + s->type;
    const char* sec = section.c_str();
    auto patterns = s->patterns;
    merge(s->patterns_flag, patterns, g.config.strings(sec, "patterns"));
    auto weights = s->weights;
    merge(s->weights_flag, weights, g.config.numbers(sec, "weights"));
    phicon_generator gen;
    phicon_generator_init(&gen, s->type.c_str());
    std::vector<const char*> ptrs;
    for (const auto& p : patterns) ptrs.push_back(p.c_str());
    if (!ptrs.empty()) {
      gen.patterns = ptrs.data();
      gen.pattern_count = ptrs.size();
    }
    if (!weights.empty()) {
      if (weights.size() != patterns.size()) usage_error("give one --weight per --pattern");
      gen.weights = weights.data();
    }
    gen.count = s->count;
    merge(s->count_flag, gen.count, g.config.count(sec, "count"));
    if (s->year_min_flag->count() > 0) gen.year_first = s->year_min;
    else if (auto y = g.config.integer(sec, "year_min")) gen.year_first = static_cast<int>(*y);
    if (s->year_max_flag->count() > 0) gen.year_last = s->year_max;
    else if (auto y = g.config.integer(sec, "year_max")) gen.year_last = static_cast<int>(*y);
    gen.seed = g.seed_for(sec);
    char* text = nullptr;
    check(phicon_generate_lexicon(&gen, &text));
    write_text(s->out, take(text));
  });
}

void setup_synth(CLI::App& app, Globals& g) {
  auto* sub = app.add_subcommand("synth", "Generate a synthetic site corpus");
  struct State {
    std::string profile = "SiteA";
    std::size_t documents = 200;
    std::size_t min_sentences = 8;
    std::size_t max_sentences = 15;
    std::string out;
    CLI::Option* profile_flag = nullptr;
    CLI::Option* documents_flag = nullptr;
    CLI::Option* min_flag = nullptr;
    CLI::Option* max_flag = nullptr;
  };
  auto s = std::make_shared<State>();
  s->profile_flag =
      sub->add_option("--profile", s->profile, "SiteA, SiteB or a profile file")->capture_default_str();
  s->documents_flag = sub->add_option("--docs", s->documents, "Documents")->capture_default_str();
  s->min_flag =
      sub->add_option("--min-sentences", s->min_sentences, "Fewest sentences per document")
          ->capture_default_str();
  s->max_flag =
      sub->add_option("--max-sentences", s->max_sentences, "Most sentences per document")
          ->capture_default_str();
  sub->add_option("--out", s->out, "Output corpus, '-' for standard output")->required();
  sub->callback([s, &g] {
    std::string profile = s->profile;
    if (s->profile_flag->count() == 0) {
      auto name = g.config.string("synth", "profile");
      if (name) profile = (*name == "SiteA" || *name == "SiteB") ? *name : *g.config.path("synth", "profile");
    }
    std::size_t documents = s->documents;
    merge(s->documents_flag, documents, g.config.count("synth", "documents"));
    std::size_t lo = s->min_sentences;
    merge(s->min_flag, lo, g.config.count("synth", "min_sentences"));
    std::size_t hi = s->max_sentences;
    merge(s->max_flag, hi, g.config.count("synth", "max_sentences"));

    phicon_profile* raw = nullptr;
    if (profile == "SiteA" || profile == "SiteB") {
      check(phicon_profile_builtin(profile.c_str(), &raw));
    } else {
      if (!fs::exists(profile)) usage_error("profile '" + profile + "' does not exist");
      check(phicon_profile_load(profile.c_str(), &raw));
    }
    Profile p(raw);
    phicon_corpus* corpus = nullptr;
    check(phicon_synthesize(p.get(), documents, lo, hi, g.seed_for("synth"), g.job_count(), &corpus));
    Corpus c(corpus);
    write_corpus(s->out, c.get());
    log("generated " + std::to_string(documents) + " " + phicon_profile_name(p.get()) + " documents");
  });
}

void setup_split(CLI::App& app, Globals& g) {
  auto* sub = app.add_subcommand("split", "Prepare a corpus and split it into train/dev/test");
  struct State {
    CorpusIo io;
    std::string out_dir;
    std::vector<double> ratios = {0.7, 0.1, 0.2};
    bool coarse = false;
    std::size_t min_count = 0;
    CLI::Option* out_flag = nullptr;
    CLI::Option* ratios_flag = nullptr;
    CLI::Option* coarse_flag = nullptr;
    CLI::Option* min_flag = nullptr;
  };
  auto s = std::make_shared<State>();
  s->io.add(sub, "--in", "Input corpus")->required();
  s->out_flag = sub->add_option("--out-dir", s->out_dir,
                                "Directory for train.conll, dev.conll, test.conll (default: paths.output_dir)");
  s->ratios_flag = sub->add_option("--ratios", s->ratios, "Train, dev and test weights")
                       ->delimiter(',')
                       ->expected(3)
                       ->capture_default_str();
  s->coarse_flag = sub->add_flag("--coarse", s->coarse, "Map fine PHI types to coarse categories");
  s->min_flag = sub->add_option("--min-count", s->min_count,
                                "Drop PHI types with fewer spans than this (0 keeps all)");
  sub->callback([s, &g] {
    std::string out_dir = required(s->out_flag, s->out_dir, g.config.path("paths", "output_dir"));
    auto ratios = s->ratios;
    merge(s->ratios_flag, ratios, g.config.numbers("split", "ratios"));
    if (ratios.size() != 3) usage_error("split ratios need three values");
    bool coarse = s->coarse;
    merge(s->coarse_flag, coarse, g.config.boolean("split", "coarse"));
    std::size_t min_count = s->min_count;
    merge(s->min_flag, min_count, g.config.count("split", "min_count"));

    Corpus corpus = read_corpus(s->io.in);
    if (coarse) {
      phicon_corpus* raw = nullptr;
      check(phicon_corpus_map_coarse(corpus.get(), &raw));
      corpus.reset(raw);
    }
    if (min_count > 0) {
      phicon_corpus* raw = nullptr;
      check(phicon_corpus_filter_rare(corpus.get(), min_count, &raw));
      corpus.reset(raw);
    }
    const double r[3] = {ratios[0], ratios[1], ratios[2]};
    phicon_corpus *train = nullptr, *dev = nullptr, *test = nullptr;
    check(phicon_corpus_split(corpus.get(), r, g.seed_for("split"), &train, &dev, &test));
    Corpus a(train), b(dev), c(test);
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    write_corpus((dir / "train.conll").string(), a.get());
    write_corpus((dir / "dev.conll").string(), b.get());
    write_corpus((dir / "test.conll").string(), c.get());
    std::size_t n[3] = {0, 0, 0};
    check(phicon_corpus_counts(a.get(), &n[0], nullptr, nullptr));
    check(phicon_corpus_counts(b.get(), &n[1], nullptr, nullptr));
    check(phicon_corpus_counts(c.get(), &n[2], nullptr, nullptr));
    log("split into " + std::to_string(n[0]) + "/" + std::to_string(n[1]) + "/" +
        std::to_string(n[2]) + " documents");
  });
}

void setup_stats(CLI::App& app, Globals&) {
  auto* sub = app.add_subcommand("stats", "Print corpus statistics");
  struct State {
    CorpusIo io;
    bool coarse = false;
  };
  auto s = std::make_shared<State>();
  s->io.add(sub, "--in", "Input corpus")->required();
  sub->add_flag("--coarse", s->coarse, "Map fine PHI types to coarse categories first");
  sub->callback([s] {
    Corpus corpus = read_corpus(s->io.in);
    if (s->coarse) {
      phicon_corpus* raw = nullptr;
      check(phicon_corpus_map_coarse(corpus.get(), &raw));
      corpus.reset(raw);
    }
    char* text = nullptr;
    check(phicon_corpus_stats(corpus.get(), &text));
    std::cout << take(text);
  });
}

void setup_train(CLI::App& app, Globals& g) {
  auto* sub = app.add_subcommand("train", "Train the sequence tagger");
  struct State {
    CorpusIo io;
    std::string model;
    std::size_t epochs = 5;
    CLI::Option* epochs_flag = nullptr;
  };
  auto s = std::make_shared<State>();
  s->io.add(sub, "--in", "Training corpus (default: paths.train)");
  sub->add_option("--model", s->model, "Output model file")->required();
  s->epochs_flag = sub->add_option("--epochs", s->epochs, "Training epochs")
                       ->check(CLI::PositiveNumber)
                       ->capture_default_str();
  sub->callback([s, &g] {
    std::string in = required(s->io.in_flag, s->io.in, g.config.path("paths", "train"));
    std::size_t epochs = s->epochs;
    merge(s->epochs_flag, epochs, g.config.count("experiment", "epochs"));
    Corpus corpus = read_corpus(in);
    phicon_model* raw = nullptr;
    check(phicon_train(corpus.get(), epochs, g.seed_for("experiment"), &raw));
    Model model(raw);
    check(phicon_model_save(model.get(), s->model.c_str()));
    log("trained on " + in + " for " + std::to_string(epochs) + " epochs");
  });
}

void setup_eval(CLI::App& app, Globals& g) {
  auto* sub = app.add_subcommand("eval", "Score a model on a labeled corpus");
  struct State {
    std::string model;
    CorpusIo io;
    std::string predictions;
  };
  auto s = std::make_shared<State>();
  sub->add_option("--model", s->model, "Model file")->required()->check(CLI::ExistingFile);
  s->io.add(sub, "--test", "Gold corpus (default: paths.test)");
  sub->add_option("--predictions", s->predictions, "Write the predicted corpus here");
  sub->callback([s, &g] {
    std::string test = required(s->io.in_flag, s->io.in, g.config.path("paths", "test"));
    phicon_model* raw = nullptr;
    check(phicon_model_load(s->model.c_str(), &raw));
    Model model(raw);
    Corpus gold = read_corpus(test);
    phicon_corpus* pred = nullptr;
    check(phicon_predict(model.get(), gold.get(), g.job_count(), &pred));
    Corpus predicted(pred);
    if (!s->predictions.empty()) write_corpus(s->predictions, predicted.get());
    phicon_scores scores;
    char* report = nullptr;
    check(phicon_evaluate(gold.get(), predicted.get(), &scores, &report));
    std::cout << take(report);
  });
}

struct PairFlags {
  CorpusIo train;
  CorpusIo test;
  const char* test_key = "test";

  void add(CLI::App* sub, const char* test_flag, const char* test_key_name) {
    train.add(sub, "--train", "Training corpus (default: paths.train)");
    test.add(sub, test_flag, "Evaluation corpus (default: paths.<key>)");
    test_key = test_key_name;
  }

  std::pair<std::string, std::string> resolve(const Globals& g) const {
    return {required(train.in_flag, train.in, g.config.path("paths", "train")),
            required(test.in_flag, test.in, g.config.path("paths", test_key))};
  }
};

void write_records(const std::optional<std::string>& path, const std::string& text) {
  if (!path) return;
  write_text(*path, text);
  log("wrote records to " + *path);
}

void setup_xeval(CLI::App& app, Globals& g) {
  auto* sub = app.add_subcommand("xeval", "Cross-dataset evaluation of augmentation arms");
  struct State {
    PairFlags pair;
    std::vector<std::string> arms = {"baseline", "phicon"};
    std::vector<double> fractions = {1.0};
    CLI::Option* arms_flag = nullptr;
    CLI::Option* fractions_flag = nullptr;
    ExperimentFlags exp;
    AugmentFlags aug;
    ResourceFlags res;
  };
  auto s = std::make_shared<State>();
  s->pair.add(sub, "--test", "test");
  s->arms_flag = sub->add_option("--arms", s->arms, "baseline, phi_only, context_only, phicon")
                     ->delimiter(',')
                     ->capture_default_str();
  s->fractions_flag = sub->add_option("--fractions", s->fractions, "Training fractions")
                          ->delimiter(',')
                          ->capture_default_str();
  s->exp.add(sub);
  s->aug.add(sub);
  s->res.add(sub);
  sub->callback([s, &g] {
    auto [train_path, test_path] = s->pair.resolve(g);
    auto arms = s->arms;
    merge(s->arms_flag, arms, g.config.strings("experiment", "arms"));
    auto fractions = s->fractions;
    merge(s->fractions_flag, fractions, g.config.numbers("experiment", "fractions"));
    for (double f : fractions) {
      if (!(f > 0.0 && f <= 1.0)) usage_error("training fractions must lie in (0, 1]");
    }
    std::string setting = stem(train_path) + "->" + stem(test_path);
    auto options = s->exp.resolve(g, setting);
    auto base = s->aug.resolve(g);
    Corpus train = read_corpus(train_path);
    Corpus test = read_corpus(test_path);
    Registry registry = load_registry(g, s->res);
    Synonyms synonyms = load_synonyms(g, s->res);
    std::vector<const char*> arm_ptrs;
    for (const auto& a : arms) arm_ptrs.push_back(a.c_str());
    char* table = nullptr;
    char* records = nullptr;
    check(phicon_cross_eval(train.get(), test.get(), arm_ptrs.data(), arm_ptrs.size(),
                            fractions.data(), fractions.size(), registry.get(), synonyms.get(),
                            &base, &options, &table, &records));
    std::cout << take(table);
    write_records(s->exp.records_path(g, "xeval"), take(records));
  });
}

void setup_ablate(CLI::App& app, Globals& g) {
  auto* sub = app.add_subcommand("ablate", "Baseline, PHI-only, context-only and full arms");
  struct State {
    PairFlags pair;
    double fraction = 1.0;
    CLI::Option* fraction_flag = nullptr;
    ExperimentFlags exp;
    AugmentFlags aug;
    ResourceFlags res;
  };
  auto s = std::make_shared<State>();
  s->pair.add(sub, "--test", "test");
  s->fraction_flag = sub->add_option("--fraction", s->fraction, "Training fraction")->capture_default_str();
  s->exp.add(sub);
  s->aug.add(sub);
  s->res.add(sub);
  sub->callback([s, &g] {
    auto [train_path, test_path] = s->pair.resolve(g);
    double fraction = resolve_fraction(s->fraction_flag, s->fraction, g.config);
    std::string setting = stem(train_path) + "->" + stem(test_path);
    auto options = s->exp.resolve(g, setting);
    auto base = s->aug.resolve(g);
    Corpus train = read_corpus(train_path);
    Corpus test = read_corpus(test_path);
    Registry registry = load_registry(g, s->res);
    Synonyms synonyms = load_synonyms(g, s->res);
    char* table = nullptr;
    char* records = nullptr;
    check(phicon_ablate(train.get(), test.get(), fraction, registry.get(), synonyms.get(), &base,
                        &options, &table, &records));
    std::cout << take(table);
    write_records(s->exp.records_path(g, "ablate"), take(records));
  });
}

void setup_sweep(CLI::App& app, Globals& g) {
  auto* sub = app.add_subcommand("sweep", "Dev-set score per augmentation factor");
  struct State {
    PairFlags pair;
    std::vector<int> alphas = {0, 1, 2, 3, 4};
    double fraction = 1.0;
    CLI::Option* alphas_flag = nullptr;
    CLI::Option* fraction_flag = nullptr;
    ExperimentFlags exp;
    AugmentFlags aug;
    ResourceFlags res;
  };
  auto s = std::make_shared<State>();
  s->pair.add(sub, "--dev", "dev");
  s->alphas_flag = sub->add_option("--alphas", s->alphas, "Factors; 0 is the unaugmented baseline")
                       ->delimiter(',')
                       ->capture_default_str();
  s->fraction_flag = sub->add_option("--fraction", s->fraction, "Training fraction")->capture_default_str();
  s->exp.add(sub);
  s->aug.add(sub);
  s->res.add(sub);
  sub->callback([s, &g] {
    auto [train_path, dev_path] = s->pair.resolve(g);
    auto alphas = s->alphas;
    merge(s->alphas_flag, alphas, g.config.integers("experiment", "alphas"));
    double fraction = resolve_fraction(s->fraction_flag, s->fraction, g.config);
    std::string setting = stem(train_path) + "->" + stem(dev_path);
    auto options = s->exp.resolve(g, setting);
    auto base = s->aug.resolve(g);
    Corpus train = read_corpus(train_path);
    Corpus dev = read_corpus(dev_path);
    Registry registry = load_registry(g, s->res);
    Synonyms synonyms = load_synonyms(g, s->res);
    char* table = nullptr;
    char* records = nullptr;
    char* notes = nullptr;
    check(phicon_sweep(train.get(), dev.get(), alphas.data(), alphas.size(), fraction,
                       registry.get(), synonyms.get(), &base, &options, &table, &records, &notes));
    std::cerr << take(notes);
    std::cout << take(table);
    write_records(s->exp.records_path(g, "sweep"), take(records));
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data augmentation for clinical de-identification corpora", "phicon"};
  app.set_version_flag("--version", std::string(phicon_version()));
  app.require_subcommand(1);
  app.fallthrough();
  app.failure_message(CLI::FailureMessage::help);

  Globals g;
  app.add_option("--config", g.config_path, "Config file; flags override its values")
      ->check(CLI::ExistingFile);
  g.seed_flag = app.add_option("--seed", g.seed, "Master seed for every random choice");
  g.jobs_flag = app.add_option("--jobs", g.jobs, "Worker threads; output does not depend on it");
  app.parse_complete_callback([&g] {
    if (!g.config_path.empty()) g.config = RunConfig::load(g.config_path);
  });

  setup_augment(app, g);
  setup_gen_lexicon(app, g);
  setup_synth(app, g);
  setup_split(app, g);
  setup_stats(app, g);
  setup_train(app, g);
  setup_eval(app, g);
  setup_xeval(app, g);
  setup_sweep(app, g);
  setup_ablate(app, g);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Failure& e) {
    std::cerr << "phicon: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "phicon: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
