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

#include "synonyms.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <unordered_map>

#include "builtin_data.hpp"
#include "corpus.hpp"
#include "errors.hpp"

namespace phicon {

std::string_view pos_name(PosTag pos) {
  switch (pos) {
    case PosTag::kNoun: return "noun";
    case PosTag::kVerb: return "verb";
    case PosTag::kAdjective: return "adj";
    case PosTag::kAdverb: return "adv";
  }
  return "noun";
}

std::optional<PosTag> parse_pos(std::string_view text) {
  std::string t = fold_case(text);
  if (t == "noun" || t == "n") return PosTag::kNoun;
  if (t == "verb" || t == "v") return PosTag::kVerb;
  if (t == "adj" || t == "adjective" || t == "a" || t == "s") return PosTag::kAdjective;
  if (t == "adv" || t == "adverb" || t == "r") return PosTag::kAdverb;
  return std::nullopt;
}

std::string fold_case(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

namespace {

std::set<std::string, std::less<>> parse_word_list(std::string_view text) {
  std::set<std::string, std::less<>> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::string w = fold_case(normalize_lemma(line));
    if (!w.empty() && w.front() != '#') out.insert(w);
  }
  return out;
}

}  // namespace

std::string normalize_lemma(std::string_view raw) {
  std::string out;
  bool pending = false;
  for (char c : raw) {
    if (c == '_' || c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      pending = !out.empty();
      continue;
    }
    if (pending) out += ' ';
    pending = false;
    out += c;
  }
  return out;
}

const std::set<std::string, std::less<>>& default_stopwords() {
  static const auto words = parse_word_list(require_builtin_file("stopwords.txt"));
  return words;
}

std::set<std::string, std::less<>> load_stopwords(const std::filesystem::path& path) {
  return parse_word_list(read_text_file(path));
}

// ---------------------------------------------------------------------------
// SynonymProvider
// ---------------------------------------------------------------------------

SynonymProvider::SynonymProvider() : stopwords_(default_stopwords()) {}

SynonymProvider::SynonymProvider(Index index, PosIndex pos_index,
                                 std::set<std::string, std::less<>> stopwords)
    : index_(std::move(index)), pos_index_(std::move(pos_index)), stopwords_(std::move(stopwords)) {
  for (auto& [key, syns] : index_) syns.erase(key.first);
  build_pools();
}

void SynonymProvider::build_pools() {
  for (auto& p : pools_) p.clear();
  for (const auto& [lemma, tags] : pos_index_) {
    if (stopwords_.count(lemma)) continue;
    for (PosTag t : tags) pools_[static_cast<int>(t)].push_back(lemma);
  }
  // pos_index_ is ordered, so each pool is already sorted.
}

std::vector<std::string> SynonymProvider::lookup_synonyms(std::string_view word, PosTag pos) const {
  std::string folded = fold_case(word);
  auto it = index_.find(Key{folded, pos});
  if (it == index_.end()) return {};
  std::vector<std::string> out;
  for (const auto& s : it->second) {
    if (s != folded) out.push_back(s);
  }
  return out;
}

std::set<PosTag> SynonymProvider::lookup_pos(std::string_view word) const {
  std::string folded = fold_case(word);
  if (stopwords_.count(folded)) return {};
  auto it = pos_index_.find(folded);
  if (it == pos_index_.end()) return {};
  return it->second;
}

std::optional<PosTag> SynonymProvider::unambiguous_pos(std::string_view word) const {
  auto tags = lookup_pos(word);
  if (tags.size() != 1) return std::nullopt;
  return *tags.begin();
}

bool SynonymProvider::is_stopword(std::string_view word) const {
  return stopwords_.count(fold_case(word)) > 0;
}

SynonymProvider SynonymProvider::with_stopwords(std::set<std::string, std::less<>> stopwords) const {
  SynonymProvider copy = *this;
  copy.stopwords_ = std::move(stopwords);
  copy.build_pools();
  return copy;
}

std::string SynonymProvider::dump() const {
  std::string out;
  for (const auto& [key, syns] : index_) {
    out += key.first;
    out += '\t';
    out += pos_name(key.second);
    out += '\t';
    bool first = true;
    for (const auto& s : syns) {
      if (!first) out += ',';
      out += s;
      first = false;
    }
    out += '\n';
  }
  for (const auto& [lemma, tags] : pos_index_) {
    out += "pos\t";
    out += lemma;
    for (PosTag t : tags) {
      out += '\t';
      out += pos_name(t);
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// WNDB
// ---------------------------------------------------------------------------

namespace {

struct WndbFile {
  const char* suffix;
  PosTag pos;
};

constexpr WndbFile kWndbFiles[] = {
    {"noun", PosTag::kNoun}, {"verb", PosTag::kVerb},
    {"adj", PosTag::kAdjective}, {"adv", PosTag::kAdverb}};

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool parse_number(std::string_view s, unsigned long& out, int base = 10) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out, base);
  return ec == std::errc() && p == s.data() + s.size();
}

// Adjective lemmas in data.adj may carry a syntactic marker: "(a)", "(p)", "(ip)".
std::string_view strip_adj_marker(std::string_view word) {
  for (std::string_view m : {"(a)", "(p)", "(ip)"}) {
    if (word.size() > m.size() && word.ends_with(m)) return word.substr(0, word.size() - m.size());
  }
  return word;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    fn(line, ++line_no);
  }
}

}  // namespace

SynonymProvider load_wndb(const std::filesystem::path& directory) {
  SynonymProvider::Index index;
  SynonymProvider::PosIndex pos_index;

  for (const auto& file : kWndbFiles) {
    auto data_path = directory / (std::string("data.") + file.suffix);
    auto index_path = directory / (std::string("index.") + file.suffix);
    std::string data_text = read_text_file(data_path);
    std::string index_text = read_text_file(index_path);

    std::unordered_map<unsigned long, std::vector<std::string>> synsets;
    for_each_line(data_text, [&](std::string_view line, std::size_t line_no) {
      if (line.empty() || line.front() == ' ') return;  // license header
      auto bar = line.find(" | ");
      auto fields = split_ws(line.substr(0, bar));
      auto bad = [&](const char* what) {
        fail(ErrorCode::kParse, data_path.string() + ":" + std::to_string(line_no) + ": " + what);
      };
      unsigned long offset = 0;
      unsigned long w_cnt = 0;
      if (fields.size() < 4 || !parse_number(fields[0], offset)) bad("malformed synset offset");
      if (!parse_number(fields[3], w_cnt, 16) || w_cnt == 0) bad("malformed word count");
      if (fields.size() < 4 + 2 * w_cnt + 1) bad("truncated synset record");
      std::vector<std::string> words;
      for (unsigned long k = 0; k < w_cnt; ++k) {
        std::string_view w = fields[4 + 2 * k];
        if (file.pos == PosTag::kAdjective) w = strip_adj_marker(w);
        words.push_back(fold_case(normalize_lemma(w)));
      }
      if (!synsets.emplace(offset, std::move(words)).second) bad("duplicate synset offset");
    });

    for_each_line(index_text, [&](std::string_view line, std::size_t line_no) {
      if (line.empty() || line.front() == ' ') return;
      auto fields = split_ws(line);
      auto bad = [&](const std::string& what) {
        fail(ErrorCode::kParse, index_path.string() + ":" + std::to_string(line_no) + ": " + what);
      };
      unsigned long synset_cnt = 0;
      unsigned long p_cnt = 0;
      if (fields.size() < 6 || !parse_number(fields[2], synset_cnt) ||
          !parse_number(fields[3], p_cnt)) {
        bad("malformed index record");
      }
      if (!parse_pos(fields[1])) bad("unknown part of speech '" + std::string(fields[1]) + "'");
      std::size_t first_offset = 4 + p_cnt + 2;
      if (fields.size() != first_offset + synset_cnt) bad("synset count does not match offsets");

      std::string lemma = fold_case(normalize_lemma(fields[0]));
      pos_index[lemma].insert(file.pos);
      auto& syns = index[{lemma, file.pos}];
      for (std::size_t k = first_offset; k < fields.size(); ++k) {
        unsigned long offset = 0;
        if (!parse_number(fields[k], offset)) bad("malformed synset offset");
        auto it = synsets.find(offset);
        if (it == synsets.end()) {
          bad("synset " + std::string(fields[k]) + " not found in " + data_path.filename().string());
        }
        for (const auto& w : it->second) {
          if (w != lemma) syns.insert(w);
        }
      }
    });
  }
  return SynonymProvider(std::move(index), std::move(pos_index));
}

// ---------------------------------------------------------------------------
// TSV
// ---------------------------------------------------------------------------

SynonymProvider parse_synonym_tsv(std::string_view text, std::string_view origin) {
  SynonymProvider::Index index;
  SynonymProvider::PosIndex pos_index;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') return;
    auto bad = [&](const std::string& what) {
      fail(ErrorCode::kParse, std::string(origin) + ":" + std::to_string(line_no) + ": " + what);
    };
    auto t1 = line.find('\t');
    if (t1 == std::string_view::npos) bad("expected <lemma>\\t<pos>\\t<synonyms>");
    auto t2 = line.find('\t', t1 + 1);
    std::string_view lemma_raw = line.substr(0, t1);
    std::string_view pos_raw =
        line.substr(t1 + 1, t2 == std::string_view::npos ? line.npos : t2 - t1 - 1);
    std::string_view syn_raw = t2 == std::string_view::npos ? std::string_view{} : line.substr(t2 + 1);
    if (syn_raw.find('\t') != std::string_view::npos) bad("too many columns");

    std::string lemma = fold_case(normalize_lemma(lemma_raw));
    if (lemma.empty()) bad("empty lemma");
    auto pos = parse_pos(pos_raw);
    if (!pos) bad("unknown part of speech '" + std::string(pos_raw) + "'");

    pos_index[lemma].insert(*pos);
    auto& syns = index[{lemma, *pos}];
    std::size_t start = 0;
    while (start <= syn_raw.size()) {
      std::size_t comma = syn_raw.find(',', start);
      std::string_view item =
          syn_raw.substr(start, comma == std::string_view::npos ? syn_raw.npos : comma - start);
      std::string s = fold_case(normalize_lemma(item));
      if (!s.empty() && s != lemma) syns.insert(std::move(s));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  });
  return SynonymProvider(std::move(index), std::move(pos_index));
}

SynonymProvider load_tsv(const std::filesystem::path& path) {
  return parse_synonym_tsv(read_text_file(path), path.string());
}

}  // namespace phicon
