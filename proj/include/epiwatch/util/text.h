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

#ifndef EPIWATCH_UTIL_TEXT_H_
#define EPIWATCH_UTIL_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace epiwatch {

// Decodes one codepoint at `pos` and advances it. Malformed sequences yield
// U+FFFD and consume one byte.
char32_t NextCodepoint(std::string_view text, size_t* pos);

void AppendUtf8(std::string* out, char32_t cp);

bool IsAlnum(char32_t cp);
bool IsAlpha(char32_t cp);
bool IsUpper(char32_t cp);
bool IsLower(char32_t cp);
bool IsSpace(char32_t cp);
char32_t ToLower(char32_t cp);

// Han, Hiragana and Katakana. These scripts are segmented one codepoint per
// token.
bool IsLogographic(char32_t cp);

std::string ToLowerUtf8(std::string_view text);

// Strips control characters, collapses whitespace runs to one space and
// trims both ends.
std::string NormalizeWhitespace(std::string_view text);

// Removes markup tags and decodes the common character entities.
std::string StripTags(std::string_view html);

std::string_view Trim(std::string_view s);
std::vector<std::string> Split(std::string_view s, char sep);

}  // namespace epiwatch

#endif  // EPIWATCH_UTIL_TEXT_H_
