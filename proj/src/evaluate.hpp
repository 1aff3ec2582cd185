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

// Binary-token scoring and the cross-dataset experiment harness.
//
// Every experiment is a grid of (seed index, arm) runs. A run subsamples the
// training documents, optionally augments them, trains a tagger and scores
// the full test corpus. Subsample and tagger seeds depend only on the seed
// index, so arms are paired.

#ifndef PHICON_SRC_EVALUATE_HPP_
#define PHICON_SRC_EVALUATE_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "augment.hpp"
#include "corpus.hpp"
#include "lexicon.hpp"
#include "synonyms.hpp"

namespace phicon {

struct TokenCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  friend bool operator==(const TokenCounts&, const TokenCounts&) = default;
};

struct CategoryScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;  // gold tokens of the category
};

struct EvalReport {
  double micro_f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  std::map<std::string, CategoryScore> per_category;  // every coarse category
  TokenCounts counts;
};

// 0 when p + r == 0.
double f1_score(double precision, double recall);

using LabelSequences = std::vector<std::vector<Label>>;

// `predicted` holds one sequence per gold sentence, in corpus order.
EvalReport binary_token_f1(const Corpus& gold, const LabelSequences& predicted);

struct ArmSpec {
  std::string name;
  std::optional<AugmentConfig> augment;  // nullopt trains on the subsample as is
};

struct ExperimentOptions {
  double train_fraction = 1.0;
  std::size_t n_seeds = 5;
  std::size_t epochs = 5;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::string setting;  // display name, e.g. "SiteA->SiteB"
};

struct ExperimentResources {
  const LexiconRegistry* registry = nullptr;
  const SynonymProvider* provider = nullptr;
};

struct ExperimentResult {
  std::string setting;
  double train_fraction = 1.0;
  unsigned alpha = 0;  // of the first augmenting arm; 0 when none augments
  std::vector<std::string> arm_order;
  std::map<std::string, std::vector<double>> arms;  // per-seed micro-F1
  std::map<std::string, double> means;
  std::map<std::string, std::vector<EvalReport>> reports;
};

std::uint64_t subsample_seed(std::uint64_t base, std::size_t seed_index);
std::uint64_t tagger_seed(std::uint64_t base, std::size_t seed_index);

// floor(fraction * |documents|) documents, original order kept.
Corpus subsample_documents(const Corpus& corpus, double fraction, std::uint64_t seed);

ExperimentResult cross_dataset_eval(const Corpus& train, const Corpus& test,
                                    const std::vector<ArmSpec>& arms,
                                    const ExperimentResources& resources,
                                    const ExperimentOptions& options);

// Named arms: "baseline", "phi_only", "context_only", "phicon".
ArmSpec make_arm(std::string_view name, const AugmentConfig& base);

ExperimentResult ablation_run(const Corpus& train, const Corpus& test, const AugmentConfig& base,
                              const ExperimentResources& resources,
                              const ExperimentOptions& options);

struct SweepPoint {
  unsigned alpha = 0;
  double mean = 0.0;
  std::vector<double> per_seed;
  double seconds = 0.0;  // wall time, informational
};

struct SweepResult {
  std::vector<SweepPoint> points;  // ascending alpha, duplicates removed
  std::vector<std::string> warnings;
};

// Each alpha is a single-arm experiment scored on `dev`; alpha 0 is the
// unaugmented baseline.
SweepResult alpha_sweep(const Corpus& train, const Corpus& dev, const std::vector<int>& alphas,
                        const AugmentConfig& base, const ExperimentResources& resources,
                        const ExperimentOptions& options);

// Text tables. Cross-dataset: one row per arm, one column per training
// fraction. Ablation: one row per arm. Sweep: one row per alpha.
std::string format_cross_table(const std::vector<ExperimentResult>& results);
std::string format_ablation_table(const ExperimentResult& result);
std::string format_sweep_table(const SweepResult& sweep);
std::string format_report(const EvalReport& report);
// Wall time per alpha, one line each. Kept out of the table and records so
// those stay reproducible.
std::string format_sweep_timings(const SweepResult& sweep);

// One JSON object per (arm, seed):
//   {"setting", "train_fraction", "alpha", "arm", "seed_index", "micro_f1",
//    "precision", "recall", "tp", "fp", "fn", "tn"}
std::string format_experiment_jsonl(const std::vector<ExperimentResult>& results);
// {"alpha", "mean", "per_seed": [...]} per line.
std::string format_sweep_jsonl(const SweepResult& sweep);

}  // namespace phicon

#endif  // PHICON_SRC_EVALUATE_HPP_
