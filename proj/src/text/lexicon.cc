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

#include "epiwatch/text/lexicon.h"

#include <fstream>

#include "epiwatch/util/error.h"
#include "epiwatch/util/text.h"

namespace epiwatch {

Lexicon Lexicon::Load(const std::string& path,
                      const std::set<std::string>& semantic_types) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open lexicon: " + path);
  Lexicon lexicon;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty() || line[0] == '#') continue;
    auto cols = Split(line, '\t');
    if (cols.size() != 5) {
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": expected 5 tab-separated columns");
    }
    LexiconEntry e;
    e.canonical_id = std::string(Trim(cols[0]));
    e.preferred_name = std::string(Trim(cols[1]));
    e.semantic_type = std::string(Trim(cols[2]));
    e.generic = Trim(cols[3]) == "1";
    for (const auto& s : Split(cols[4], '|')) {
      auto surface = ToLowerUtf8(Trim(s));
      if (!surface.empty()) e.surfaces.push_back(std::move(surface));
    }
    if (!semantic_types.empty() && !semantic_types.contains(e.semantic_type))
      continue;
    lexicon.Add(std::move(e));
  }
  return lexicon;
}

void Lexicon::Add(LexiconEntry entry) {
  if (entry.surfaces.empty()) {
    throw InvalidInput("lexicon entry " + entry.canonical_id + " has no surfaces");
  }
  if (by_id_.contains(entry.canonical_id)) {
    throw InvalidInput("duplicate lexicon id " + entry.canonical_id);
  }
  const int index = static_cast<int>(entries_.size());
  for (const auto& s : entry.surfaces) matcher_.Add(s, index);
  by_id_.emplace(entry.canonical_id, entries_.size());
  entries_.push_back(std::move(entry));
}

const LexiconEntry* Lexicon::Find(std::string_view canonical_id) const {
  auto it = by_id_.find(std::string(canonical_id));
  return it == by_id_.end() ? nullptr : &entries_[it->second];
}

std::unordered_set<std::string> LoadWordList(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open word list: " + path);
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    auto w = Trim(line);
    if (w.empty() || w[0] == '#') continue;
    words.insert(ToLowerUtf8(w));
  }
  return words;
}

namespace {

void TagField(const Document& doc, Field field, const Lexicon& lexicon,
              const std::unordered_set<std::string>& blacklist,
              std::vector<KeywordMention>* out) {
  const std::string& text = doc.working(field);
  const auto tokens = Tokenize(text);
  for (const auto& m : lexicon.matcher().FindAll(tokens)) {
    const Span span{tokens[m.first_token].span.begin,
                    tokens[m.first_token + m.token_count - 1].span.end};
    std::string surface = text.substr(span.begin, span.size());
    if (blacklist.contains(ToLowerUtf8(surface))) continue;
    const auto& entry = lexicon.entries()[m.payloads->front()];
    out->push_back({entry.canonical_id, std::move(surface), span, field});
  }
}

}  // namespace

std::vector<KeywordMention> TagKeywords(
    const Document& doc, const Lexicon& lexicon,
    const std::unordered_set<std::string>& blacklist) {
  std::vector<KeywordMention> mentions;
  TagField(doc, Field::kTitle, lexicon, blacklist, &mentions);
  TagField(doc, Field::kBody, lexicon, blacklist, &mentions);
  return mentions;
}

}  // namespace epiwatch
