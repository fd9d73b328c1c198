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

#include "epiwatch/text/phrase_matcher.h"

#include <algorithm>

namespace epiwatch {
namespace {
constexpr char kSep = '\x1f';
}  // namespace

std::string PhraseMatcher::Key(const std::vector<std::string>& lower_tokens) {
  std::string key;
  for (size_t i = 0; i < lower_tokens.size(); ++i) {
    if (i > 0) key.push_back(kSep);
    key += lower_tokens[i];
  }
  return key;
}

bool PhraseMatcher::Add(std::string_view phrase, int payload) {
  const auto tokens = LowerTokens(phrase);
  if (tokens.empty()) return false;
  std::string key;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) key.push_back(kSep);
    key += tokens[i];
    prefixes_.insert(key);
  }
  auto& payloads = phrases_[key];
  if (std::find(payloads.begin(), payloads.end(), payload) == payloads.end()) {
    payloads.push_back(payload);
  }
  max_tokens_ = std::max(max_tokens_, tokens.size());
  return true;
}

bool PhraseMatcher::MatchAt(const std::vector<Token>& tokens, size_t i,
                            Match* out) const {
  std::string key;
  bool found = false;
  for (size_t len = 1; len <= max_tokens_ && i + len <= tokens.size(); ++len) {
    if (len > 1) key.push_back(kSep);
    key += tokens[i + len - 1].lower;
    if (!prefixes_.contains(key)) break;
    if (auto it = phrases_.find(key); it != phrases_.end()) {
      out->first_token = i;
      out->token_count = len;
      out->payloads = &it->second;
      found = true;
    }
  }
  return found;
}

std::vector<PhraseMatcher::Match> PhraseMatcher::FindAll(
    const std::vector<Token>& tokens) const {
  std::vector<Match> matches;
  size_t i = 0;
  while (i < tokens.size()) {
    Match m;
    if (MatchAt(tokens, i, &m)) {
      matches.push_back(m);
      i += m.token_count;
    } else {
      ++i;
    }
  }
  return matches;
}

}  // namespace epiwatch
