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

#include "evaluate.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "errors.hpp"
#include "json.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "tagger.hpp"

namespace phicon {

double f1_score(double precision, double recall) {
  double sum = precision + recall;
  return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

const std::string* coarse_or_null(const Label& label) {
  return label.is_phi() ? &taxonomy().coarse_of(label.type) : nullptr;
}

}  // namespace

EvalReport binary_token_f1(const Corpus& gold, const LabelSequences& predicted) {
  const auto& categories = taxonomy().coarse_types();
  std::map<std::string, std::array<std::size_t, 3>> per;  // tp, predicted, support
  for (const auto& c : categories) per[c] = {0, 0, 0};

  EvalReport report;
  std::size_t k = 0;
  for (const auto& doc : gold.documents) {
    for (std::size_t s = 0; s < doc.sentences.size(); ++s, ++k) {
      const Sentence& sentence = doc.sentences[s];
      if (k >= predicted.size()) {
        fail(ErrorCode::kInvalidArgument, "prediction missing for document '" + doc.id +
                                              "' sentence " + std::to_string(s));
      }
      const auto& pred = predicted[k];
      if (pred.size() != sentence.tokens.size()) {
        fail(ErrorCode::kInvalidArgument,
             "prediction for document '" + doc.id + "' sentence " + std::to_string(s) + " has " +
                 std::to_string(pred.size()) + " labels for " +
                 std::to_string(sentence.tokens.size()) + " tokens");
      }
      for (std::size_t t = 0; t < pred.size(); ++t) {
        const Label& g = sentence.tokens[t].label;
        const Label& p = pred[t];
        auto& c = report.counts;
        if (g.is_phi() && p.is_phi()) ++c.tp;
        else if (!g.is_phi() && p.is_phi()) ++c.fp;
        else if (g.is_phi() && !p.is_phi()) ++c.fn;
        else ++c.tn;

        const std::string* gc = coarse_or_null(g);
        const std::string* pc = coarse_or_null(p);
        if (gc) ++per[*gc][2];
        if (pc) ++per[*pc][1];
        if (gc && pc && *gc == *pc) ++per[*gc][0];
      }
    }
  }
  if (k != predicted.size()) {
    fail(ErrorCode::kInvalidArgument, std::to_string(predicted.size()) +
                                          " predicted sequences for " + std::to_string(k) +
                                          " gold sentences");
  }
  const auto& c = report.counts;
  report.precision = ratio(c.tp, c.tp + c.fp);
  report.recall = ratio(c.tp, c.tp + c.fn);
  report.micro_f1 = f1_score(report.precision, report.recall);
  for (const auto& [name, v] : per) {
    CategoryScore score;
    score.precision = ratio(v[0], v[1]);
    score.recall = ratio(v[0], v[2]);
    score.f1 = f1_score(score.precision, score.recall);
    score.support = v[2];
    report.per_category[name] = score;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

std::uint64_t subsample_seed(std::uint64_t base, std::size_t seed_index) {
  return derive_seed(base, {seed_index, hash_tag("subsample")});
}

std::uint64_t tagger_seed(std::uint64_t base, std::size_t seed_index) {
  return derive_seed(base, {seed_index, hash_tag("tagger")});
}

Corpus subsample_documents(const Corpus& corpus, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    fail(ErrorCode::kInvalidArgument, "train_fraction must lie in (0, 1]");
  }
  const std::size_t n = corpus.documents.size();
  // The epsilon keeps fractions such as 0.3 * 10 from flooring to 2.
  const auto k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
  if (k == 0) {
    fail(ErrorCode::kDomain, "training subsample is empty (" + std::to_string(n) +
                                 " documents at fraction " + std::to_string(fraction) + ")");
  }
  if (k == n) return corpus;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  RandomStream rng(seed);
  rng.shuffle(idx);
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  Corpus out;
  for (std::size_t i : idx) out.documents.push_back(corpus.documents[i]);
  return out;
}

namespace {

void require_resources(const ExperimentResources& r, const std::vector<ArmSpec>& arms) {
  bool augmenting = std::any_of(arms.begin(), arms.end(), [](const ArmSpec& a) { return a.augment.has_value(); });
  if (augmenting && (r.registry == nullptr || r.provider == nullptr)) {
    fail(ErrorCode::kInvalidArgument, "augmenting arms need a lexicon registry and a synonym provider");
  }
}

}  // namespace

ExperimentResult cross_dataset_eval(const Corpus& train, const Corpus& test,
                                    const std::vector<ArmSpec>& arms,
                                    const ExperimentResources& resources,
                                    const ExperimentOptions& options) {
  if (arms.empty()) fail(ErrorCode::kInvalidArgument, "no experiment arms given");
  if (options.n_seeds == 0) fail(ErrorCode::kInvalidArgument, "n_seeds must be at least 1");
  if (options.epochs == 0) fail(ErrorCode::kInvalidArgument, "epochs must be at least 1");
  std::set<std::string> names;
  for (const auto& arm : arms) {
    if (arm.name.empty()) fail(ErrorCode::kInvalidArgument, "arm name must not be empty");
    if (!names.insert(arm.name).second) fail(ErrorCode::kInvalidArgument, "duplicate arm '" + arm.name + "'");
    if (arm.augment) arm.augment->validate();
  }
  require_resources(resources, arms);

  // Subsamples are shared by every arm of a seed index.
  std::vector<Corpus> subsamples(options.n_seeds);
  for (std::size_t s = 0; s < options.n_seeds; ++s) {
    subsamples[s] = subsample_documents(train, options.train_fraction, subsample_seed(options.seed, s));
  }

  const std::size_t n_arms = arms.size();
  std::vector<EvalReport> reports(options.n_seeds * n_arms);
  parallel_for(reports.size(), options.jobs, [&](std::size_t i) {
    const std::size_t s = i / n_arms;
    const ArmSpec& arm = arms[i % n_arms];
    const Corpus* training = &subsamples[s];
    Corpus augmented;
    if (arm.augment) {
      AugmentConfig config = *arm.augment;
      config.master_seed = derive_seed(config.master_seed, {s});
      augmented = augment_corpus(*training, *resources.registry, *resources.provider, config).corpus;
      training = &augmented;
    }
    TaggerModel model = train_tagger(*training, options.epochs, tagger_seed(options.seed, s));
    reports[i] = binary_token_f1(test, predict_corpus(model, test));
  });

  ExperimentResult result;
  result.setting = options.setting;
  result.train_fraction = options.train_fraction;
  for (const auto& arm : arms) {
    if (arm.augment && arm.augment->alpha > 0) {
      result.alpha = arm.augment->alpha;
      break;
    }
  }
  for (std::size_t a = 0; a < n_arms; ++a) {
    const std::string& name = arms[a].name;
    result.arm_order.push_back(name);
    auto& scores = result.arms[name];
    auto& arm_reports = result.reports[name];
    for (std::size_t s = 0; s < options.n_seeds; ++s) {
      const EvalReport& r = reports[s * n_arms + a];
      scores.push_back(r.micro_f1);
      arm_reports.push_back(r);
    }
    result.means[name] = std::accumulate(scores.begin(), scores.end(), 0.0) /
                         static_cast<double>(scores.size());
  }
  return result;
}

ArmSpec make_arm(std::string_view name, const AugmentConfig& base) {
  AugmentConfig c = base;
  if (name == "baseline") return ArmSpec{"baseline", std::nullopt};
  if (name == "phi_only") {
    c.enable_phi = true;
    c.enable_sr = c.enable_ri = false;
  } else if (name == "context_only") {
    c.enable_phi = false;
    c.enable_sr = c.enable_ri = true;
  } else if (name == "phicon") {
    c.enable_phi = c.enable_sr = c.enable_ri = true;
  } else {
    fail(ErrorCode::kInvalidArgument, "unknown arm '" + std::string(name) +
                                          "' (expected baseline, phi_only, context_only or phicon)");
  }
  return ArmSpec{std::string(name), c};
}

ExperimentResult ablation_run(const Corpus& train, const Corpus& test, const AugmentConfig& base,
                              const ExperimentResources& resources,
                              const ExperimentOptions& options) {
  std::vector<ArmSpec> arms;
  for (const char* name : {"baseline", "phi_only", "context_only", "phicon"}) arms.push_back(make_arm(name, base));
  return cross_dataset_eval(train, test, arms, resources, options);
}

SweepResult alpha_sweep(const Corpus& train, const Corpus& dev, const std::vector<int>& alphas,
                        const AugmentConfig& base, const ExperimentResources& resources,
                        const ExperimentOptions& options) {
  if (alphas.empty()) fail(ErrorCode::kInvalidArgument, "alpha list is empty");
  SweepResult sweep;
  std::set<int> unique;
  for (int a : alphas) {
    if (a < 0) fail(ErrorCode::kInvalidArgument, "alpha must be non-negative, got " + std::to_string(a));
    if (!unique.insert(a).second) {
      sweep.warnings.push_back("duplicate alpha " + std::to_string(a) + " ignored");
    }
  }
  for (int a : unique) {
    AugmentConfig config = base;
    config.alpha = static_cast<unsigned>(a);
    ArmSpec arm = a == 0 ? ArmSpec{"alpha0", std::nullopt} : ArmSpec{"alpha" + std::to_string(a), config};
    auto start = std::chrono::steady_clock::now();
    ExperimentResult r = cross_dataset_eval(train, dev, {arm}, resources, options);
    std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    SweepPoint point;
    point.alpha = static_cast<unsigned>(a);
    point.mean = r.means.at(arm.name);
    point.per_seed = r.arms.at(arm.name);
    point.seconds = elapsed.count();
    sweep.points.push_back(std::move(point));
  }
  return sweep;
}

// ---------------------------------------------------------------------------
// Reporting
// ---------------------------------------------------------------------------

namespace {

std::string fixed(double x, int digits = 4) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string lpad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

std::string percent(double fraction) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%g%%", fraction * 100.0);
  return buf;
}

}  // namespace

std::string format_cross_table(const std::vector<ExperimentResult>& results) {
  if (results.empty()) return "";
  // Rows follow the arm order of the first result; settings group columns.
  std::vector<std::string> arm_order = results.front().arm_order;
  std::size_t name_width = 12;
  for (const auto& a : arm_order) name_width = std::max(name_width, a.size() + 2);
  std::size_t col = 12;
  for (const auto& r : results) col = std::max(col, r.setting.size());

  std::string out = pad("Setting", name_width);
  for (const auto& r : results) out += " | " + lpad(r.setting.empty() ? "-" : r.setting, col);
  out += "\n" + pad("Train size", name_width);
  for (const auto& r : results) out += " | " + lpad(percent(r.train_fraction), col);
  out += "\n" + std::string(name_width + results.size() * (col + 3), '-') + "\n";
  for (const auto& arm : arm_order) {
    out += pad(arm, name_width);
    for (const auto& r : results) {
      auto it = r.means.find(arm);
      out += " | " + lpad(it == r.means.end() ? "-" : fixed(it->second), col);
    }
    out += "\n";
  }
  return out;
}

std::string format_ablation_table(const ExperimentResult& result) {
  static const std::map<std::string, std::string> kDisplay = {
      {"baseline", "Baseline"},
      {"phi_only", "+ PHI augmentation"},
      {"context_only", "+ Context augmentation"},
      {"phicon", "+ PHICON"},
  };
  const std::string heading = result.setting.empty() ? "micro-F1" : result.setting;
  const std::size_t col = std::max<std::size_t>(14, heading.size());
  std::string out = pad("Model", 26) + " | " + lpad(heading, col) + "\n";
  out += std::string(29 + col, '-') + "\n";
  for (const auto& arm : result.arm_order) {
    auto d = kDisplay.find(arm);
    out += pad(d == kDisplay.end() ? arm : d->second, 26) + " | " + lpad(fixed(result.means.at(arm)), col) + "\n";
  }
  return out;
}

std::string format_sweep_table(const SweepResult& sweep) {
  std::string out = "alpha | mean micro-F1\n";
  out += "------+--------------\n";
  for (const auto& p : sweep.points) {
    out += lpad(std::to_string(p.alpha), 5) + " | " + lpad(fixed(p.mean), 13) + "\n";
  }
  return out;
}

std::string format_sweep_timings(const SweepResult& sweep) {
  std::string out;
  for (const auto& p : sweep.points) {
    out += "alpha " + std::to_string(p.alpha) + ": " + fixed(p.seconds, 2) + " s\n";
  }
  return out;
}

std::string format_report(const EvalReport& report) {
  const auto& c = report.counts;
  std::string out = "binary token level: precision " + fixed(report.precision) + "  recall " +
                    fixed(report.recall) + "  micro-F1 " + fixed(report.micro_f1) + "\n";
  out += "counts: tp " + std::to_string(c.tp) + "  fp " + std::to_string(c.fp) + "  fn " +
         std::to_string(c.fn) + "  tn " + std::to_string(c.tn) + "\n";
  out += pad("category", 10) + " | precision |  recall |      f1 | support\n";
  for (const auto& [name, s] : report.per_category) {
    out += pad(name, 10) + " | " + lpad(fixed(s.precision), 9) + " | " + lpad(fixed(s.recall), 7) +
           " | " + lpad(fixed(s.f1), 7) + " | " + lpad(std::to_string(s.support), 7) + "\n";
  }
  return out;
}

std::string format_experiment_jsonl(const std::vector<ExperimentResult>& results) {
  std::string out;
  for (const auto& r : results) {
    for (const auto& arm : r.arm_order) {
      const auto& reports = r.reports.at(arm);
      for (std::size_t s = 0; s < reports.size(); ++s) {
        const EvalReport& e = reports[s];
        nlohmann::ordered_json j;
        j["setting"] = r.setting;
        j["train_fraction"] = r.train_fraction;
        j["alpha"] = r.alpha;
        j["arm"] = arm;
        j["seed_index"] = s;
        j["micro_f1"] = e.micro_f1;
        j["precision"] = e.precision;
        j["recall"] = e.recall;
        j["tp"] = e.counts.tp;
        j["fp"] = e.counts.fp;
        j["fn"] = e.counts.fn;
        j["tn"] = e.counts.tn;
        out += j.dump() + "\n";
      }
    }
  }
  return out;
}

std::string format_sweep_jsonl(const SweepResult& sweep) {
  std::string out;
  for (const auto& p : sweep.points) {
    nlohmann::ordered_json j;
    j["alpha"] = p.alpha;
    j["mean"] = p.mean;
    j["per_seed"] = p.per_seed;
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace phicon
