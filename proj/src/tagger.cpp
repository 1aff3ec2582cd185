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

#include "tagger.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numeric>

#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "synonyms.hpp"

namespace phicon {

namespace {

char char_class(char c) {
  if (c >= 'A' && c <= 'Z') return 'X';
  if (c >= 'a' && c <= 'z') return 'x';
  if (c >= '0' && c <= '9') return 'd';
  if (static_cast<unsigned char>(c) >= 0x80) return 'u';
  return c;
}

std::string word_shape(std::string_view word, std::size_t limit) {
  std::string out;
  for (std::size_t i = 0; i < word.size() && i < limit; ++i) out += char_class(word[i]);
  return out;
}

std::string short_shape(std::string_view word) {
  std::string out;
  for (char c : word) {
    char k = char_class(c);
    if (out.empty() || out.back() != k) out += k;
  }
  return out;
}

bool is_title(std::string_view w) {
  if (w.empty() || !(w[0] >= 'A' && w[0] <= 'Z')) return false;
  return std::none_of(w.begin() + 1, w.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

constexpr std::string_view kStart = "<S>";
constexpr std::string_view kEnd = "</S>";

bool allowed(const Label* prev, const Label& next) {
  if (next.kind != LabelKind::kInside) return true;
  return prev != nullptr && prev->is_phi() && prev->type == next.type;
}

std::string prev_label_feature(const Label* prev) {
  return "prevlabel=" + (prev ? prev->str() : std::string(kStart));
}

}  // namespace

std::vector<std::string> featurize(const Sentence& sentence, std::size_t index) {
  const auto& toks = sentence.tokens;
  if (index >= toks.size()) {
    fail(ErrorCode::kInvalidArgument, "featurize: index " + std::to_string(index) +
                                          " out of range for sentence of " +
                                          std::to_string(toks.size()) + " tokens");
  }
  const std::string& word = toks[index].text;
  const std::string lower = fold_case(word);
  const std::string prev = index == 0 ? std::string(kStart) : fold_case(toks[index - 1].text);
  const std::string next =
      index + 1 == toks.size() ? std::string(kEnd) : fold_case(toks[index + 1].text);

  std::vector<std::string> f;
  f.reserve(20);
  f.push_back("w=" + lower);
  f.push_back("shape=" + word_shape(word, 5));
  f.push_back("sshape=" + short_shape(word));
  for (std::size_t k = 1; k <= 3 && k <= lower.size(); ++k) {
    f.push_back("pre" + std::to_string(k) + "=" + lower.substr(0, k));
  }
  for (std::size_t k = 1; k <= 3 && k <= lower.size(); ++k) {
    f.push_back("suf" + std::to_string(k) + "=" + lower.substr(lower.size() - k));
  }
  f.push_back("prev=" + prev);
  f.push_back("next=" + next);
  f.push_back("bigram=" + prev + "|" + lower);
  bool all_digits = std::all_of(word.begin(), word.end(), [](char c) { return c >= '0' && c <= '9'; });
  bool any_digit = std::any_of(word.begin(), word.end(), [](char c) { return c >= '0' && c <= '9'; });
  if (all_digits) f.push_back("isdigit=1");
  if (any_digit) f.push_back("hasdigit=1");
  if (word.find('-') != std::string::npos) f.push_back("hashyphen=1");
  if (is_title(word)) f.push_back("istitle=1");
  if (index == 0) f.push_back("start=1");
  return f;
}

std::uint64_t corpus_fingerprint(const Corpus& corpus) {
  return hash_tag(serialize_conll(corpus));
}

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

namespace {

class FeatureTable {
 public:
  std::uint32_t intern(const std::string& f) {
    auto [it, inserted] = ids_.try_emplace(f, static_cast<std::uint32_t>(names_.size()));
    if (inserted) names_.push_back(f);
    return it->second;
  }
  std::size_t size() const { return names_.size(); }
  const std::string& name(std::uint32_t id) const { return names_[id]; }

 private:
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<std::string> names_;
};

// Weights with lazily accumulated running sums for averaging.
class AveragedWeights {
 public:
  AveragedWeights(std::size_t n_labels) : n_labels_(n_labels) {}

  void resize(std::size_t n_features) {
    std::size_t n = n_features * n_labels_;
    weights_.resize(n, 0.0);
    totals_.resize(n, 0.0);
    stamps_.resize(n, 0);
  }

  double get(std::uint32_t f, std::size_t label) const { return weights_[f * n_labels_ + label]; }

  void add(std::uint32_t f, std::size_t label, double delta, std::uint64_t step) {
    std::size_t k = f * n_labels_ + label;
    totals_[k] += static_cast<double>(step - stamps_[k]) * weights_[k];
    stamps_[k] = step;
    weights_[k] += delta;
  }

  std::vector<double> averaged_row(std::uint32_t f, std::uint64_t step) const {
    std::vector<double> row(n_labels_);
    for (std::size_t l = 0; l < n_labels_; ++l) {
      std::size_t k = f * n_labels_ + l;
      double total = totals_[k] + static_cast<double>(step - stamps_[k]) * weights_[k];
      row[l] = step == 0 ? 0.0 : total / static_cast<double>(step);
    }
    return row;
  }

 private:
  std::size_t n_labels_;
  std::vector<double> weights_;
  std::vector<double> totals_;
  std::vector<std::uint64_t> stamps_;
};

}  // namespace

TaggerModel train_tagger(const Corpus& corpus, std::size_t epochs, std::uint64_t seed) {
  if (epochs == 0) fail(ErrorCode::kInvalidArgument, "epochs must be at least 1");

  std::vector<const Sentence*> sentences;
  for (const auto& doc : corpus.documents) {
    for (const auto& s : doc.sentences) {
      if (s.tokens.empty()) continue;
      if (auto v = validate_bio(s); !v.empty()) {
        fail(ErrorCode::kDomain, "training sentence in document '" + doc.id +
                                     "' is not BIO-valid at token " +
                                     std::to_string(v.front().position));
      }
      sentences.push_back(&s);
    }
  }
  if (sentences.empty()) fail(ErrorCode::kInvalidArgument, "cannot train on an empty corpus");

  // Label table: Outside first, then by label text.
  std::map<std::string, Label> by_text;
  for (const Sentence* s : sentences) {
    for (const auto& t : s->tokens) {
      if (t.label.is_phi()) by_text.emplace(t.label.str(), t.label);
    }
  }
  TaggerModel model;
  model.labels.push_back(Label::outside());
  for (auto& [text, label] : by_text) model.labels.push_back(label);
  const std::size_t n_labels = model.labels.size();
  std::map<std::string, std::size_t> label_index;
  for (std::size_t l = 0; l < n_labels; ++l) label_index[model.labels[l].str()] = l;

  FeatureTable table;
  const std::uint32_t bias = table.intern("bias");
  const std::uint32_t prev_start = table.intern(prev_label_feature(nullptr));
  std::vector<std::uint32_t> prev_feature(n_labels);
  for (std::size_t l = 0; l < n_labels; ++l) prev_feature[l] = table.intern(prev_label_feature(&model.labels[l]));

  struct Instance {
    std::vector<std::vector<std::uint32_t>> features;
    std::vector<std::size_t> gold;
  };
  std::vector<Instance> data(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const Sentence& s = *sentences[i];
    for (std::size_t t = 0; t < s.tokens.size(); ++t) {
      std::vector<std::uint32_t> ids;
      for (const auto& f : featurize(s, t)) ids.push_back(table.intern(f));
      data[i].features.push_back(std::move(ids));
      data[i].gold.push_back(label_index.at(s.tokens[t].label.str()));
    }
  }

  AveragedWeights w(n_labels);
  w.resize(table.size());

  std::vector<std::vector<char>> mask(n_labels + 1, std::vector<char>(n_labels));
  for (std::size_t p = 0; p <= n_labels; ++p) {
    const Label* prev = p == n_labels ? nullptr : &model.labels[p];
    for (std::size_t l = 0; l < n_labels; ++l) mask[p][l] = allowed(prev, model.labels[l]);
  }

  std::uint64_t step = 0;
  std::vector<double> scores(n_labels);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    RandomStream rng(derive_seed(seed, {epoch}));
    rng.shuffle(order);
    for (std::size_t idx : order) {
      const Instance& inst = data[idx];
      std::size_t prev = n_labels;  // sentence start
      for (std::size_t t = 0; t < inst.gold.size(); ++t) {
        ++step;
        const std::uint32_t pf = prev == n_labels ? prev_start : prev_feature[prev];
        for (std::size_t l = 0; l < n_labels; ++l) {
          double s = w.get(bias, l) + w.get(pf, l);
          for (std::uint32_t f : inst.features[t]) s += w.get(f, l);
          scores[l] = s;
        }
        std::size_t best = 0;
        double best_score = -INFINITY;
        for (std::size_t l = 0; l < n_labels; ++l) {
          if (mask[prev][l] && scores[l] > best_score) {
            best = l;
            best_score = scores[l];
          }
        }
        const std::size_t gold = inst.gold[t];
        if (best != gold) {
          auto update = [&](std::uint32_t f) {
            w.add(f, gold, 1.0, step);
            w.add(f, best, -1.0, step);
          };
          update(bias);
          update(pf);
          for (std::uint32_t f : inst.features[t]) update(f);
        }
        prev = best;
      }
    }
  }

  for (std::uint32_t f = 0; f < table.size(); ++f) {
    auto row = w.averaged_row(f, step);
    if (std::any_of(row.begin(), row.end(), [](double x) { return x != 0.0; })) {
      model.weights.emplace(table.name(f), std::move(row));
    }
  }
  model.meta = TrainingMeta{epochs, seed, corpus_fingerprint(corpus)};
  return model;
}

// ---------------------------------------------------------------------------
// Prediction
// ---------------------------------------------------------------------------

std::vector<Label> predict(const TaggerModel& model, const Sentence& sentence) {
  const std::size_t n_labels = model.labels.size();
  std::vector<Label> out;
  out.reserve(sentence.tokens.size());
  std::vector<double> scores(n_labels);

  auto add_row = [&](const std::string& feature) {
    auto it = model.weights.find(feature);
    if (it == model.weights.end()) return;
    for (std::size_t l = 0; l < n_labels; ++l) scores[l] += it->second[l];
  };

  for (std::size_t t = 0; t < sentence.tokens.size(); ++t) {
    const Label* prev = t == 0 ? nullptr : &out.back();
    std::fill(scores.begin(), scores.end(), 0.0);
    add_row("bias");
    add_row(prev_label_feature(prev));
    for (const auto& f : featurize(sentence, t)) add_row(f);
    std::size_t best = 0;  // Outside is always allowed
    for (std::size_t l = 1; l < n_labels; ++l) {
      if (allowed(prev, model.labels[l]) && scores[l] > scores[best]) best = l;
    }
    out.push_back(model.labels[best]);
  }
  return out;
}

std::vector<std::vector<Label>> predict_corpus(const TaggerModel& model, const Corpus& corpus,
                                               std::size_t jobs) {
  std::vector<const Sentence*> sentences;
  for (const auto& doc : corpus.documents) {
    for (const auto& s : doc.sentences) sentences.push_back(&s);
  }
  std::vector<std::vector<Label>> out(sentences.size());
  parallel_for(sentences.size(), jobs, [&](std::size_t i) { out[i] = predict(model, *sentences[i]); });
  return out;
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

namespace {

std::string hex_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  std::string_view next() {
    if (pos_ >= text_.size()) fail(ErrorCode::kParse, "truncated model file");
    std::size_t nl = text_.find('\n', pos_);
    if (nl == std::string_view::npos) fail(ErrorCode::kParse, "truncated model file");
    std::string_view line = text_.substr(pos_, nl - pos_);
    pos_ = nl + 1;
    ++line_;
    return line;
  }

  std::string_view keyed(std::string_view key) {
    std::string_view line = next();
    if (!line.starts_with(key) || line.size() <= key.size() || line[key.size()] != ' ') {
      fail(ErrorCode::kParse, "model line " + std::to_string(line_) + ": expected '" +
                                  std::string(key) + "'");
    }
    return line.substr(key.size() + 1);
  }

  std::size_t line() const { return line_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 0;
};

std::uint64_t parse_u64(std::string_view s, int base, std::size_t line) {
  std::string tmp(s);
  char* end = nullptr;
  errno = 0;
  unsigned long long v = std::strtoull(tmp.c_str(), &end, base);
  if (tmp.empty() || errno != 0 || *end != '\0') {
    fail(ErrorCode::kParse, "model line " + std::to_string(line) + ": bad number '" + tmp + "'");
  }
  return v;
}

}  // namespace

std::string serialize_model(const TaggerModel& model) {
  std::string out = "phicon-tagger\n";
  out += "version " + std::to_string(kModelFormatVersion) + "\n";
  out += "template " + model.feature_template_version + "\n";
  out += "epochs " + std::to_string(model.meta.epochs) + "\n";
  out += "seed " + std::to_string(model.meta.seed) + "\n";
  char fp[32];
  std::snprintf(fp, sizeof fp, "%016llx", static_cast<unsigned long long>(model.meta.corpus_fingerprint));
  out += std::string("fingerprint ") + fp + "\n";
  out += "labels " + std::to_string(model.labels.size()) + "\n";
  for (const auto& l : model.labels) out += l.str() + "\n";

  std::vector<const std::string*> names;
  names.reserve(model.weights.size());
  for (const auto& [name, _] : model.weights) names.push_back(&name);
  std::sort(names.begin(), names.end(), [](auto* a, auto* b) { return *a < *b; });
  out += "features " + std::to_string(names.size()) + "\n";
  for (const std::string* name : names) {
    out += *name;
    out += '\t';
    const auto& row = model.weights.at(*name);
    for (std::size_t l = 0; l < row.size(); ++l) {
      if (l) out += ' ';
      out += hex_double(row[l]);
    }
    out += '\n';
  }
  out += "end\n";
  return out;
}

TaggerModel parse_model(std::string_view text) {
  LineReader in(text);
  if (in.next() != "phicon-tagger") fail(ErrorCode::kVersion, "not a phicon tagger model (bad magic)");
  auto version = parse_u64(in.keyed("version"), 10, in.line());
  if (version != static_cast<std::uint64_t>(kModelFormatVersion)) {
    fail(ErrorCode::kVersion, "unsupported model format version " + std::to_string(version) +
                                  " (expected " + std::to_string(kModelFormatVersion) + ")");
  }
  TaggerModel model;
  model.feature_template_version = std::string(in.keyed("template"));
  if (model.feature_template_version != kFeatureTemplateVersion) {
    fail(ErrorCode::kVersion, "model uses feature template '" + model.feature_template_version +
                                  "', this build provides '" + std::string(kFeatureTemplateVersion) + "'");
  }
  model.meta.epochs = parse_u64(in.keyed("epochs"), 10, in.line());
  model.meta.seed = parse_u64(in.keyed("seed"), 10, in.line());
  model.meta.corpus_fingerprint = parse_u64(in.keyed("fingerprint"), 16, in.line());
  auto n_labels = parse_u64(in.keyed("labels"), 10, in.line());
  for (std::uint64_t i = 0; i < n_labels; ++i) {
    try {
      model.labels.push_back(parse_label(in.next()));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kParse) throw;
      fail(ErrorCode::kParse, "model line " + std::to_string(in.line()) + ": " + e.what());
    }
  }
  if (model.labels.empty() || !model.labels.front().is_outside()) {
    fail(ErrorCode::kParse, "model label table must start with O");
  }
  auto n_features = parse_u64(in.keyed("features"), 10, in.line());
  model.weights.reserve(n_features);
  for (std::uint64_t i = 0; i < n_features; ++i) {
    std::string_view line = in.next();
    auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      fail(ErrorCode::kParse, "model line " + std::to_string(in.line()) + ": missing weights");
    }
    std::vector<double> row;
    row.reserve(n_labels);
    std::string rest(line.substr(tab + 1));
    const char* p = rest.c_str();
    while (*p) {
      char* end = nullptr;
      double v = std::strtod(p, &end);
      if (end == p || !std::isfinite(v)) {
        fail(ErrorCode::kParse, "model line " + std::to_string(in.line()) + ": bad weight");
      }
      row.push_back(v);
      p = end;
      while (*p == ' ') ++p;
    }
    if (row.size() != n_labels) {
      fail(ErrorCode::kParse, "model line " + std::to_string(in.line()) + ": expected " +
                                  std::to_string(n_labels) + " weights");
    }
    model.weights.emplace(std::string(line.substr(0, tab)), std::move(row));
  }
  if (in.next() != "end") fail(ErrorCode::kParse, "model file lacks its end marker");
  return model;
}

void save_model(const TaggerModel& model, const std::filesystem::path& path) {
  write_text_file(path, serialize_model(model));
}

TaggerModel load_model(const std::filesystem::path& path) {
  std::string text = read_text_file(path);
  try {
    return parse_model(text);
  } catch (const Error& e) {
    fail(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace phicon
