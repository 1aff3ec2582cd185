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

#include "corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "errors.hpp"
#include "rng.hpp"

namespace phicon {

// ---------------------------------------------------------------------------
// Taxonomy
// ---------------------------------------------------------------------------

PhiTaxonomy::PhiTaxonomy()
    : fine_{"Organization", "Hospital", "Location", "Patient", "Doctor", "ID",
            "Username", "Zip", "Date", "Phone", "MedicalRecord"},
      coarse_{"NAME", "LOCATION", "DATE", "ID", "CONTACT"},
      generated_{"ID", "Username", "Zip", "Date", "Phone", "MedicalRecord"} {
  members_["NAME"] = {"Doctor", "Patient", "Username"};
  members_["LOCATION"] = {"Hospital", "Location", "Zip", "Organization"};
  members_["DATE"] = {"Date"};
  members_["ID"] = {"ID", "MedicalRecord"};
  members_["CONTACT"] = {"Phone"};
  for (const auto& [coarse, fines] : members_) {
    for (const auto& f : fines) coarse_of_[f] = coarse;
  }
}

bool PhiTaxonomy::is_fine(std::string_view name) const {
  return std::find(fine_.begin(), fine_.end(), name) != fine_.end();
}

bool PhiTaxonomy::is_coarse(std::string_view name) const {
  return members_.find(name) != members_.end();
}

bool PhiTaxonomy::is_generator_backed(std::string_view fine) const {
  return std::find(generated_.begin(), generated_.end(), fine) != generated_.end();
}

const std::string& PhiTaxonomy::coarse_of(std::string_view name) const {
  // "ID" is both a fine type and a coarse category; it maps to itself either way.
  if (auto it = coarse_of_.find(name); it != coarse_of_.end()) return it->second;
  if (auto it = members_.find(name); it != members_.end()) return it->first;
  fail(ErrorCode::kInvalidArgument, "unknown PHI type '" + std::string(name) + "'");
}

const std::vector<std::string>& PhiTaxonomy::members(std::string_view coarse) const {
  auto it = members_.find(coarse);
  if (it == members_.end()) {
    fail(ErrorCode::kInvalidArgument, "not a coarse PHI category: '" + std::string(coarse) + "'");
  }
  return it->second;
}

const PhiTaxonomy& taxonomy() {
  static const PhiTaxonomy instance;
  return instance;
}

// ---------------------------------------------------------------------------
// Labels and tokens
// ---------------------------------------------------------------------------

std::string Label::str() const {
  switch (kind) {
    case LabelKind::kOutside: return "O";
    case LabelKind::kBegin: return "B-" + type;
    case LabelKind::kInside: return "I-" + type;
  }
  return "O";
}

Label parse_label(std::string_view text) {
  if (text == "O") return Label::outside();
  if (text.size() < 3 || text[1] != '-' || (text[0] != 'B' && text[0] != 'I')) {
    fail(ErrorCode::kParse, "malformed label '" + std::string(text) + "'");
  }
  std::string type(text.substr(2));
  if (!taxonomy().is_known(type)) fail(ErrorCode::kParse, "unknown PHI type '" + type + "'");
  return text[0] == 'B' ? Label::begin(std::move(type)) : Label::inside(std::move(type));
}

bool is_valid_token_text(std::string_view text) {
  if (text.empty()) return false;
  return text.find_first_of(" \t\r\n") == std::string_view::npos;
}

std::size_t Corpus::sentence_count() const {
  std::size_t n = 0;
  for (const auto& d : documents) n += d.sentences.size();
  return n;
}

std::size_t Corpus::token_count() const {
  std::size_t n = 0;
  for (const auto& d : documents) {
    for (const auto& s : d.sentences) n += s.size();
  }
  return n;
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

constexpr std::string_view kDocPrefix = "#doc id=";

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + what);
}

bool continues_span(const Sentence& s, const Label& label) {
  if (s.tokens.empty()) return false;
  const Label& prev = s.tokens.back().label;
  return prev.is_phi() && prev.type == label.type;
}

}  // namespace

Corpus parse_conll(std::string_view text, ParseOptions options) {
  Corpus corpus;
  std::set<std::string, std::less<>> seen_ids;
  Sentence current;
  bool have_doc = false;

  auto close_sentence = [&] {
    if (!current.tokens.empty()) {
      corpus.documents.back().sentences.push_back(std::move(current));
      current = Sentence{};
    }
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;

    if (line.empty()) {
      if (have_doc) close_sentence();
      continue;
    }

    if (line.starts_with(kDocPrefix)) {
      std::string id(line.substr(kDocPrefix.size()));
      if (id.empty()) parse_fail(line_no, "empty document id");
      if (id == kImplicitDocId) parse_fail(line_no, "document id '" + id + "' is reserved");
      if (id.find_first_of("\t\r") != std::string::npos) {
        parse_fail(line_no, "document id contains a control character");
      }
      if (!seen_ids.insert(id).second) parse_fail(line_no, "duplicate document id '" + id + "'");
      if (have_doc) close_sentence();
      corpus.documents.push_back(Document{std::move(id), {}});
      have_doc = true;
      continue;
    }

    // Token line: "<text>\t<label>". Lines without a tab may use a single
    // space as the separator; token texts never contain whitespace.
    std::string_view word;
    std::string_view label_text;
    if (std::size_t tab = line.find('\t'); tab != std::string_view::npos) {
      if (line.find('\t', tab + 1) != std::string_view::npos) {
        parse_fail(line_no, "expected 2 tab-separated columns");
      }
      word = line.substr(0, tab);
      label_text = line.substr(tab + 1);
    } else {
      std::size_t sp = line.find(' ');
      if (sp == std::string_view::npos || line.find(' ', sp + 1) != std::string_view::npos) {
        parse_fail(line_no, "expected 2 columns");
      }
      word = line.substr(0, sp);
      label_text = line.substr(sp + 1);
    }
    if (!is_valid_token_text(word)) parse_fail(line_no, "invalid token text");

    Label label;
    try {
      label = parse_label(label_text);
    } catch (const Error& e) {
      parse_fail(line_no, e.what());
    }

    if (!have_doc) {
      seen_ids.insert(std::string(kImplicitDocId));
      corpus.documents.push_back(Document{std::string(kImplicitDocId), {}});
      have_doc = true;
    }

    if (label.kind == LabelKind::kInside && !continues_span(current, label)) {
      if (!options.repair) {
        parse_fail(line_no, "I-" + label.type + " does not continue a " + label.type + " span");
      }
      label.kind = LabelKind::kBegin;
    }
    current.tokens.push_back(Token{std::string(word), std::move(label)});
  }
  if (have_doc) close_sentence();
  return corpus;
}

std::string serialize_conll(const Corpus& corpus) {
  std::string out;
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    const Document& doc = corpus.documents[d];
    if (!(d == 0 && doc.id == kImplicitDocId)) {
      out += kDocPrefix;
      out += doc.id;
      out += '\n';
    }
    for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
      if (s > 0) out += '\n';
      for (const Token& t : doc.sentences[s].tokens) {
        out += t.text;
        out += '\t';
        out += t.label.str();
        out += '\n';
      }
    }
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) fail(ErrorCode::kIo, "error reading '" + path.string() + "'");
  return std::move(buf).str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) fail(ErrorCode::kIo, "error writing '" + path.string() + "'");
}

Corpus read_conll(const std::filesystem::path& path, ParseOptions options) {
  std::string text = read_text_file(path);
  try {
    return parse_conll(text, options);
  } catch (const Error& e) {
    fail(e.code(), path.string() + ": " + e.what());
  }
}

void write_conll(const std::filesystem::path& path, const Corpus& corpus) {
  write_text_file(path, serialize_conll(corpus));
}

// ---------------------------------------------------------------------------
// BIO structure
// ---------------------------------------------------------------------------

std::vector<Violation> validate_bio(const Sentence& sentence) {
  std::vector<Violation> out;
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    const Label& label = sentence.tokens[i].label;
    if (label.is_phi() && label.type.empty()) {
      out.push_back({i, label.str() + " has no PHI type"});
      continue;
    }
    if (label.is_outside() && !label.type.empty()) {
      out.push_back({i, "Outside label carries PHI type '" + label.type + "'"});
      continue;
    }
    if (label.kind != LabelKind::kInside) continue;
    if (i == 0) {
      out.push_back({i, "I-" + label.type + " at sentence start"});
      continue;
    }
    const Label& prev = sentence.tokens[i - 1].label;
    if (prev.is_outside()) {
      out.push_back({i, "I-" + label.type + " follows O"});
    } else if (prev.type != label.type) {
      out.push_back({i, "I-" + label.type + " follows " + prev.str()});
    }
  }
  return out;
}

bool is_valid_bio(const Sentence& sentence) { return validate_bio(sentence).empty(); }

std::vector<EntitySpan> extract_entities(const Sentence& sentence, std::size_t sentence_index) {
  if (auto v = validate_bio(sentence); !v.empty()) {
    fail(ErrorCode::kDomain, "invalid BIO at token " + std::to_string(v.front().position) + ": " +
                                 v.front().description);
  }
  std::vector<EntitySpan> spans;
  const auto& toks = sentence.tokens;
  for (std::size_t i = 0; i < toks.size();) {
    if (toks[i].label.kind != LabelKind::kBegin) {
      ++i;
      continue;
    }
    EntitySpan span;
    span.sentence_index = sentence_index;
    span.start = i;
    span.phi_type = toks[i].label.type;
    span.surface = toks[i].text;
    ++i;
    while (i < toks.size() && toks[i].label.kind == LabelKind::kInside) {
      span.surface += ' ';
      span.surface += toks[i].text;
      ++i;
    }
    span.end = i;
    spans.push_back(std::move(span));
  }
  return spans;
}

Sentence relabel_from_spans(const Sentence& sentence, std::span<const EntitySpan> spans) {
  Sentence out = sentence;
  for (auto& t : out.tokens) t.label = Label::outside();
  for (const auto& span : spans) {
    if (span.start >= span.end || span.end > out.tokens.size()) {
      fail(ErrorCode::kInvalidArgument, "span out of range");
    }
    out.tokens[span.start].label = Label::begin(span.phi_type);
    for (std::size_t i = span.start + 1; i < span.end; ++i) {
      out.tokens[i].label = Label::inside(span.phi_type);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dataset preparation
// ---------------------------------------------------------------------------

Corpus map_to_coarse(const Corpus& corpus) {
  const PhiTaxonomy& tax = taxonomy();
  Corpus out = corpus;
  for (auto& doc : out.documents) {
    for (auto& s : doc.sentences) {
      for (auto& t : s.tokens) {
        if (t.label.is_outside()) continue;
        // "ID" names both a fine type and its category; it is left as is.
        if (t.label.type == "ID") continue;
        if (tax.is_coarse(t.label.type)) {
          fail(ErrorCode::kDomain, "already coarse: label " + t.label.str() + " in document '" +
                                       doc.id + "'");
        }
        t.label.type = tax.coarse_of(t.label.type);
      }
    }
  }
  return out;
}

std::map<std::string, std::size_t> type_frequencies(const Corpus& corpus) {
  std::map<std::string, std::size_t> freq;
  for (const auto& doc : corpus.documents) {
    for (const auto& s : doc.sentences) {
      for (const auto& t : s.tokens) {
        if (t.label.kind == LabelKind::kBegin) ++freq[t.label.type];
      }
    }
  }
  return freq;
}

Corpus filter_rare_types(const Corpus& corpus, std::size_t threshold) {
  if (threshold == 0) return corpus;
  auto freq = type_frequencies(corpus);
  Corpus out = corpus;
  for (auto& doc : out.documents) {
    for (auto& s : doc.sentences) {
      for (auto& t : s.tokens) {
        if (t.label.is_phi() && freq[t.label.type] < threshold) t.label = Label::outside();
      }
    }
  }
  return out;
}

std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitRatios& ratios) {
  double total = 0.0;
  for (double r : ratios) {
    if (!(r > 0.0)) fail(ErrorCode::kInvalidArgument, "split ratios must be positive");
    total += r;
  }
  if (std::abs(total - 1.0) > 1e-6) {
    fail(ErrorCode::kInvalidArgument, "split ratios must sum to 1");
  }
  std::array<std::size_t, 3> sizes{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    double exact = static_cast<double>(n) * ratios[i];
    double fl = std::floor(exact + 1e-9);
    sizes[i] = static_cast<std::size_t>(fl);
    remainder[i] = exact - fl;
    assigned += sizes[i];
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++sizes[order[k % 3]];
  return sizes;
}

CorpusSplit split_corpus(const Corpus& corpus, const SplitRatios& ratios, std::uint64_t seed) {
  const std::size_t n = corpus.documents.size();
  if (n < 3) {
    fail(ErrorCode::kInvalidArgument,
         "cannot split " + std::to_string(n) + " documents into 3 parts");
  }
  auto sizes = split_sizes(n, ratios);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  RandomStream rng(seed);
  rng.shuffle(order);

  CorpusSplit out;
  std::array<Corpus*, 3> parts{&out.train, &out.dev, &out.test};
  std::size_t k = 0;
  for (std::size_t p = 0; p < 3; ++p) {
    for (std::size_t i = 0; i < sizes[p]; ++i) {
      parts[p]->documents.push_back(corpus.documents[order[k++]]);
    }
  }
  return out;
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats stats;
  stats.note_count = corpus.documents.size();
  if (stats.note_count == 0) return stats;
  std::size_t spans = 0;
  for (const auto& doc : corpus.documents) {
    for (const auto& s : doc.sentences) {
      for (const auto& t : s.tokens) {
        if (t.label.kind == LabelKind::kBegin) {
          ++spans;
          ++stats.phi_counts[taxonomy().coarse_of(t.label.type)];
        }
      }
    }
  }
  auto notes = static_cast<double>(stats.note_count);
  stats.avg_tokens_per_note = static_cast<double>(corpus.token_count()) / notes;
  stats.avg_phi_per_note = static_cast<double>(spans) / notes;
  return stats;
}

std::string format_stats(const CorpusStats& stats) {
  char buf[128];
  std::string out;
  std::snprintf(buf, sizeof buf, "%-22s %10zu\n", "#notes", stats.note_count);
  out += buf;
  std::snprintf(buf, sizeof buf, "%-22s %10.1f\n", "#avg tokens / note", stats.avg_tokens_per_note);
  out += buf;
  std::snprintf(buf, sizeof buf, "%-22s %10.1f\n", "#avg PHI / note", stats.avg_phi_per_note);
  out += buf;
  std::size_t total = 0;
  for (const auto& coarse : taxonomy().coarse_types()) {
    auto it = stats.phi_counts.find(coarse);
    std::size_t count = it == stats.phi_counts.end() ? 0 : it->second;
    total += count;
    std::snprintf(buf, sizeof buf, "%-22s %10zu\n", coarse.c_str(), count);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "%-22s %10zu\n", "Total", total);
  out += buf;
  return out;
}

}  // namespace phicon
