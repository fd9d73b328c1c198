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

#include "epiwatch/text/tokenize.h"

#include "epiwatch/util/text.h"

namespace epiwatch {

std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> tokens;
  size_t pos = 0;
  size_t start = std::string_view::npos;

  auto flush = [&](size_t end) {
    if (start == std::string_view::npos) return;
    Token t;
    t.text = std::string(text.substr(start, end - start));
    t.lower = ToLowerUtf8(t.text);
    t.span = {start, end};
    tokens.push_back(std::move(t));
    start = std::string_view::npos;
  };

  while (pos < text.size()) {
    const size_t here = pos;
    const char32_t cp = NextCodepoint(text, &pos);
    if (IsLogographic(cp)) {
      flush(here);
      start = here;
      flush(pos);
    } else if (IsAlnum(cp)) {
      if (start == std::string_view::npos) start = here;
    } else {
      flush(here);
    }
  }
  flush(text.size());
  return tokens;
}

std::vector<std::string> LowerTokens(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : Tokenize(text)) out.push_back(std::move(t.lower));
  return out;
}

bool IsWhitespaceGap(std::string_view gap) {
  size_t pos = 0;
  while (pos < gap.size()) {
    if (!IsSpace(NextCodepoint(gap, &pos))) return false;
  }
  return true;
}

}  // namespace epiwatch
