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

#ifndef EPIWATCH_TEXT_LEXICON_H_
#define EPIWATCH_TEXT_LEXICON_H_

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "epiwatch/ingest/document.h"
#include "epiwatch/text/phrase_matcher.h"

namespace epiwatch {

struct LexiconEntry {
  std::string canonical_id;
  std::string preferred_name;
  std::string semantic_type;
  // Generic concepts ("disease", "outbreak") are tagged but never seed
  // narratives.
  bool generic = false;
  std::vector<std::string> surfaces;
};

class Lexicon {
 public:
  // TSV: canonical_id, preferred_name, semantic_type, generic (0|1),
  // surface|surface|... Rows whose semantic type is outside a non-empty
  // `semantic_types` whitelist are skipped.
  static Lexicon Load(const std::string& path,
                      const std::set<std::string>& semantic_types = {});

  // Throws InvalidInput on duplicate ids or entries without surfaces.
  void Add(LexiconEntry entry);

  const LexiconEntry* Find(std::string_view canonical_id) const;
  const std::vector<LexiconEntry>& entries() const { return entries_; }
  const PhraseMatcher& matcher() const { return matcher_; }

 private:
  std::vector<LexiconEntry> entries_;
  std::unordered_map<std::string, size_t> by_id_;
  PhraseMatcher matcher_;
};

// Lowercased surfaces, one per line. Blank lines and '#' comments ignored.
std::unordered_set<std::string> LoadWordList(const std::string& path);

std::vector<KeywordMention> TagKeywords(
    const Document& doc, const Lexicon& lexicon,
    const std::unordered_set<std::string>& blacklist);

}  // namespace epiwatch

#endif  // EPIWATCH_TEXT_LEXICON_H_
