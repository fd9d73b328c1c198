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

#ifndef EPIWATCH_TEXT_COUNTS_H_
#define EPIWATCH_TEXT_COUNTS_H_

#include <string_view>
#include <vector>

#include "epiwatch/ingest/document.h"

namespace epiwatch {

// Recognizes "<integer> deaths|dead|cases|infections|hospitalized|hospitalised"
// and "death toll|case count rises|rose|climbs|climbed to <integer>".
// Integers are digit runs, optionally grouped with thousands commas
// ("1,204"). Number words are not parsed. Spans cover the whole phrase.
std::vector<CasualtyCount> ExtractCounts(std::string_view text,
                                         Field field = Field::kBody);

// Both working fields of a document, title first.
std::vector<CasualtyCount> ExtractCounts(const Document& doc);

}  // namespace epiwatch

#endif  // EPIWATCH_TEXT_COUNTS_H_
