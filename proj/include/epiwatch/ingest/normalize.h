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

#ifndef EPIWATCH_INGEST_NORMALIZE_H_
#define EPIWATCH_INGEST_NORMALIZE_H_

#include <string_view>

#include "epiwatch/ingest/document.h"
#include "epiwatch/ingest/translation.h"

namespace epiwatch {

// doc_id of already-normalized title and body.
std::string ComputeDocId(std::string_view title, std::string_view body);

// Collapses whitespace and strips control characters in the raw and
// working text, assigns doc_id = hash(title "\n" body) and status pending.
// Throws InvalidInput when both title and body are empty.
Document Normalize(const RawArticle& article, std::string_view lang,
                   const WorkingText& working, Timestamp fetched_at);

}  // namespace epiwatch

#endif  // EPIWATCH_INGEST_NORMALIZE_H_
