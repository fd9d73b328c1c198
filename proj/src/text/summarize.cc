// Copyright 2026 The Epiwatch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "epiwatch/text/summarize.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "epiwatch/text/tokenize.h"
#include "epiwatch/util/error.h"
#include "epiwatch/util/text.h"

namespace epiwatch {
namespace {

constexpr std::array<std::string_view, 9> kAbbreviations = {
    "Dr", "St", "No", "Fig", "Mr", "Mrs", "Ms", "Prof", "Gen"};

bool IsAbbreviationBefore(std::string_view text, size_t dot) {
  size_t b = dot;
  while (b > 0 && ((text[b - 1] >= 'a' && text[b - 1] <= 'z') ||
                   (text[b - 1] >= 'A' && text[b - 1] <= 'Z'))) {
    --b;
  }
  if (b > 0 && text[b - 1] != ' ' && text[b - 1] != '(' && text[b - 1] != '\n') {
    return false;
  }
  const auto word = text.substr(b, dot - b);
  for (auto a : kAbbreviations) {
    if (a == word) return true;
  }
  return false;
}

bool HasAlpha(std::string_view s) {
  size_t pos = 0;
  while (pos < s.size()) {
    if (IsAlpha(NextCodepoint(s, &pos))) return true;
  }
  return false;
}

}  // namespace

std::vector<Span> SplitSentences(std::string_view text) {
  std::vector<Span> sentences;
  size_t start = 0;
  auto emit = [&](size_t end) {
    auto b = start;
    auto e = end;
    while (b < e && (text[b] == ' ' || text[b] == '\n' || text[b] == '\t')) ++b;
    while (e > b && (text[e - 1] == ' ' || text[e - 1] == '\n' || text[e - 1] == '\t'))
      --e;
    if (e > b) sentences.push_back({b, e});
  };
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != '.' && c != '?' && c != '!') continue;
    size_t j = i + 1;
    // Closing quotes and brackets stay with the sentence.
    while (j < text.size() && (text[j] == '"' || text[j] == '\'' || text[j] == ')'))
      ++j;
    if (j >= text.size()) break;
    size_t k = j;
    while (k < text.size() && (text[k] == ' ' || text[k] == '\n' || text[k] == '\t')) ++k;
    if (k == j || k >= text.size()) continue;
    size_t pos = k;
    const char32_t next = NextCodepoint(text, &pos);
    if (!IsUpper(next) && next != '"') continue;
    if (c == '.' && IsAbbreviationBefore(text, i)) continue;
    emit(j);
    start = k;
    i = k - 1;
  }
  emit(text.size());
  return sentences;
}

std::vector<std::string> ContentWords(
    std::string_view text, const std::unordered_set<std::string>& stop_words) {
  std::vector<std::string> out;
  for (auto& t : Tokenize(text)) {
    if (!HasAlpha(t.lower) || stop_words.contains(t.lower)) continue;
    out.push_back(std::move(t.lower));
  }
  return out;
}

namespace {

struct Candidate {
  std::string text;
  double score = 0.0;
  Timestamp published{};
  size_t doc_order = 0;
  size_t position = 0;
  std::vector<std::string> tokens;
};

bool ContainsSequence(const std::vector<std::string>& hay,
                      const std::vector<std::string>& needle) {
  if (needle.empty() || needle.size() > hay.size()) return false;
  for (size_t i = 0; i + needle.size() <= hay.size(); ++i) {
    if (std::equal(needle.begin(), needle.end(), hay.begin() + static_cast<long>(i)))
      return true;
  }
  return false;
}

}  // namespace

std::vector<std::string> Summarize(
    const std::vector<const Document*>& docs,
    const std::vector<std::string>& keyword_ids, const Lexicon& lexicon,
    const std::unordered_set<std::string>& stop_words, size_t n) {
  if (n < 1) throw InvalidInput("summary length must be >= 1");
  if (docs.empty()) throw InvalidInput("summarize needs at least one document");

  std::vector<std::vector<std::string>> surfaces;
  for (const auto& id : keyword_ids) {
    if (const auto* e = lexicon.Find(id)) {
      for (const auto& s : e->surfaces) surfaces.push_back(LowerTokens(s));
    }
  }

  std::vector<Candidate> candidates;
  std::unordered_map<std::string, size_t> df;
  for (size_t d = 0; d < docs.size(); ++d) {
    const Document& doc = *docs[d];
    const std::string& text = doc.working_body.empty() ? doc.working_title : doc.working_body;
    std::set<std::string> seen;
    size_t position = 0;
    for (const Span& s : SplitSentences(text)) {
      Candidate c;
      c.text = text.substr(s.begin, s.size());
      c.published = doc.raw.published_at;
      c.doc_order = d;
      c.position = position++;
      c.tokens = LowerTokens(c.text);
      for (const auto& t : c.tokens) seen.insert(t);
      candidates.push_back(std::move(c));
    }
    for (const auto& t : seen) ++df[t];
  }

  std::set<std::string> vocabulary;
  for (const auto& s : surfaces) vocabulary.insert(s.begin(), s.end());
  for (const auto& c : candidates) {
    bool has_surface = false;
    for (const auto& s : surfaces) {
      if (ContainsSequence(c.tokens, s)) {
        has_surface = true;
        break;
      }
    }
    if (!has_surface) continue;
    for (const auto& t : c.tokens) {
      if (HasAlpha(t) && !stop_words.contains(t)) vocabulary.insert(t);
    }
  }

  const double total_docs = static_cast<double>(docs.size());
  for (auto& c : candidates) {
    for (const auto& t : c.tokens) {
      if (!vocabulary.contains(t)) continue;
      c.score += std::log(1.0 + total_docs / static_cast<double>(df[t]));
    }
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     if (a.score != b.score) return a.score > b.score;
                     if (a.published != b.published) return a.published < b.published;
                     if (a.doc_order != b.doc_order) return a.doc_order < b.doc_order;
                     return a.position < b.position;
                   });

  std::vector<std::string> summary;
  std::set<std::string> taken;
  for (auto& c : candidates) {
    if (summary.size() >= n) break;
    if (!taken.insert(c.text).second) continue;
    summary.push_back(std::move(c.text));
  }
  return summary;
}

}  // namespace epiwatch
