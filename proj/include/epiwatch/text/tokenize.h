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

#ifndef EPIWATCH_TEXT_TOKENIZE_H_
#define EPIWATCH_TEXT_TOKENIZE_H_

#include <string>
#include <string_view>
#include <vector>

#include "epiwatch/ingest/document.h"

namespace epiwatch {

struct Token {
  std::string text;
  std::string lower;
  Span span;
};

// Splits on non-alphanumeric boundaries. Han and kana codepoints become
// single-codepoint tokens.
std::vector<Token> Tokenize(std::string_view text);

// Lowercased tokens only, for callers that do not need spans.
std::vector<std::string> LowerTokens(std::string_view text);

// True when every codepoint of `gap` is whitespace.
bool IsWhitespaceGap(std::string_view gap);

}  // namespace epiwatch

#endif  // EPIWATCH_TEXT_TOKENIZE_H_
