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

#ifndef EPIWATCH_TEXT_PHRASE_MATCHER_H_
#define EPIWATCH_TEXT_PHRASE_MATCHER_H_

#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "epiwatch/text/tokenize.h"

namespace epiwatch {

// Greedy longest-match lookup of lowercased token sequences. Used for the
// medical lexicon, the gazetteer name index and job titles.
class PhraseMatcher {
 public:
  struct Match {
    size_t first_token = 0;
    size_t token_count = 0;
    // Payloads registered for the matched phrase, in insertion order.
    const std::vector<int>* payloads = nullptr;
  };

  // Adds a phrase; it is tokenized with the same rules as the text.
  // Returns false when the phrase has no tokens.
  bool Add(std::string_view phrase, int payload);

  // Longest registered phrase starting at token `i`, if any.
  bool MatchAt(const std::vector<Token>& tokens, size_t i, Match* out) const;

  // Non-overlapping left-to-right greedy matches.
  std::vector<Match> FindAll(const std::vector<Token>& tokens) const;

  static std::string Key(const std::vector<std::string>& lower_tokens);

  bool empty() const { return phrases_.empty(); }

 private:
  std::unordered_map<std::string, std::vector<int>> phrases_;
  std::unordered_set<std::string> prefixes_;
  size_t max_tokens_ = 0;
};

}  // namespace epiwatch

#endif  // EPIWATCH_TEXT_PHRASE_MATCHER_H_
