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

#ifndef EPIWATCH_TEXT_SUMMARIZE_H_
#define EPIWATCH_TEXT_SUMMARIZE_H_

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "epiwatch/ingest/document.h"
#include "epiwatch/text/lexicon.h"

namespace epiwatch {

// Sentence boundaries: '.', '?' or '!' followed by whitespace and an
// uppercase letter, or end of text. "Dr.", "St.", "No.", "Fig." (and a few
// more honorifics) never end a sentence.
std::vector<Span> SplitSentences(std::string_view text);

// Alphabetic tokens that are not stop words, lowercased.
std::vector<std::string> ContentWords(
    std::string_view text, const std::unordered_set<std::string>& stop_words);

// Extractive summary of a narrative's documents. The scoring vocabulary is
// the tokens of the keywords' lexicon surfaces plus the content words that
// co-occur with a surface in some sentence. A sentence scores the sum of
// ln(1 + N / df) over its tokens in that vocabulary, where df counts
// documents. The top `n` distinct sentences are returned, ties broken by
// earlier published_at and then by position.
std::vector<std::string> Summarize(
    const std::vector<const Document*>& docs,
    const std::vector<std::string>& keyword_ids, const Lexicon& lexicon,
    const std::unordered_set<std::string>& stop_words, size_t n);

}  // namespace epiwatch

#endif  // EPIWATCH_TEXT_SUMMARIZE_H_
