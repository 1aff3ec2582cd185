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

// BIO-labeled corpora and their two-column file format.
//
// File format (UTF-8):
//
//   #doc id=<id>          opens a document
//   <text>\t<label>       one token; label is O, B-<Type> or I-<Type>
//   <blank line>          closes the current sentence
//
// Token lines that appear before any #doc line belong to an implicit first
// document whose id is kImplicitDocId; that document is written back without
// a header so such files round-trip byte-for-byte.

#ifndef PHICON_SRC_CORPUS_HPP_
#define PHICON_SRC_CORPUS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace phicon {

// ---------------------------------------------------------------------------
// Taxonomy
// ---------------------------------------------------------------------------

class PhiTaxonomy {
 public:
  PhiTaxonomy();

  const std::vector<std::string>& fine_types() const { return fine_; }
  const std::vector<std::string>& coarse_types() const { return coarse_; }

  bool is_fine(std::string_view name) const;
  bool is_coarse(std::string_view name) const;
  bool is_known(std::string_view name) const { return is_fine(name) || is_coarse(name); }
  bool is_generator_backed(std::string_view fine) const;

  // Coarse category of a fine type; a coarse name maps to itself.
  const std::string& coarse_of(std::string_view name) const;

  // Fine members of a coarse category, in listing order.
  const std::vector<std::string>& members(std::string_view coarse) const;

  const std::vector<std::string>& generator_backed() const { return generated_; }

 private:
  std::vector<std::string> fine_;
  std::vector<std::string> coarse_;
  std::vector<std::string> generated_;
  std::map<std::string, std::string, std::less<>> coarse_of_;
  std::map<std::string, std::vector<std::string>, std::less<>> members_;
};

const PhiTaxonomy& taxonomy();

// ---------------------------------------------------------------------------
// Data model
// ---------------------------------------------------------------------------

enum class LabelKind : std::uint8_t { kOutside, kBegin, kInside };

struct Label {
  LabelKind kind = LabelKind::kOutside;
  std::string type;  // empty iff kind == kOutside

  static Label outside() { return {}; }
  static Label begin(std::string type) { return {LabelKind::kBegin, std::move(type)}; }
  static Label inside(std::string type) { return {LabelKind::kInside, std::move(type)}; }

  bool is_outside() const { return kind == LabelKind::kOutside; }
  bool is_phi() const { return kind != LabelKind::kOutside; }

  std::string str() const;

  friend bool operator==(const Label&, const Label&) = default;
};

// Parses "O", "B-Type" or "I-Type". Throws kParse on malformed input or an
// unknown type name.
Label parse_label(std::string_view text);

struct Token {
  std::string text;
  Label label;
  friend bool operator==(const Token&, const Token&) = default;
};

struct Sentence {
  std::vector<Token> tokens;
  std::size_t size() const { return tokens.size(); }
  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct Document {
  std::string id;
  std::vector<Sentence> sentences;
  friend bool operator==(const Document&, const Document&) = default;
};

struct Corpus {
  std::vector<Document> documents;

  std::size_t sentence_count() const;
  std::size_t token_count() const;
  friend bool operator==(const Corpus&, const Corpus&) = default;
};

inline constexpr std::string_view kImplicitDocId = "<implicit>";

// True when text is a legal token: non-empty, no space, tab, CR or LF.
bool is_valid_token_text(std::string_view text);

// ---------------------------------------------------------------------------
// File I/O
// ---------------------------------------------------------------------------

struct ParseOptions {
  // Rewrites a dangling I-X (not preceded by B-X or I-X) to B-X instead of
  // failing.
  bool repair = false;
};

Corpus parse_conll(std::string_view text, ParseOptions options = {});
std::string serialize_conll(const Corpus& corpus);

Corpus read_conll(const std::filesystem::path& path, ParseOptions options = {});
void write_conll(const std::filesystem::path& path, const Corpus& corpus);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// ---------------------------------------------------------------------------
// BIO structure
// ---------------------------------------------------------------------------

struct Violation {
  std::size_t position;
  std::string description;
};

std::vector<Violation> validate_bio(const Sentence& sentence);
bool is_valid_bio(const Sentence& sentence);

struct EntitySpan {
  std::size_t sentence_index = 0;
  std::size_t start = 0;  // inclusive
  std::size_t end = 0;    // exclusive
  std::string phi_type;
  std::string surface;
  friend bool operator==(const EntitySpan&, const EntitySpan&) = default;
};

// Throws kDomain when the sentence is not BIO-valid.
std::vector<EntitySpan> extract_entities(const Sentence& sentence,
                                         std::size_t sentence_index = 0);

// Overwrites every label of the sentence from the given spans (Outside
// elsewhere). Inverse of extract_entities on valid sentences.
Sentence relabel_from_spans(const Sentence& sentence, std::span<const EntitySpan> spans);

// ---------------------------------------------------------------------------
// Dataset preparation
// ---------------------------------------------------------------------------

// Fine PHI types -> coarse categories. Throws kDomain "already coarse" when a
// coarse label is present.
Corpus map_to_coarse(const Corpus& corpus);

// Relabels to Outside every span whose type has strictly fewer than
// `threshold` spans in the corpus.
Corpus filter_rare_types(const Corpus& corpus, std::size_t threshold);

// Span counts per type over the whole corpus.
std::map<std::string, std::size_t> type_frequencies(const Corpus& corpus);

using SplitRatios = std::array<double, 3>;

struct CorpusSplit {
  Corpus train;
  Corpus dev;
  Corpus test;
};

// Partition sizes for n documents: floor(n * r) each, then the leftover
// documents go to the parts with the largest fractional remainders, ties
// resolved train, dev, test.
std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitRatios& ratios);

CorpusSplit split_corpus(const Corpus& corpus, const SplitRatios& ratios, std::uint64_t seed);

struct CorpusStats {
  std::size_t note_count = 0;
  double avg_tokens_per_note = 0.0;
  double avg_phi_per_note = 0.0;
  std::map<std::string, std::size_t> phi_counts;  // coarse category -> spans
};

CorpusStats corpus_stats(const Corpus& corpus);
std::string format_stats(const CorpusStats& stats);

}  // namespace phicon

#endif  // PHICON_SRC_CORPUS_HPP_
