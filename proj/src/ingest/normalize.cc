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

#include "epiwatch/ingest/normalize.h"

#include "epiwatch/util/error.h"
#include "epiwatch/util/hash.h"
#include "epiwatch/util/text.h"

namespace epiwatch {

std::string ComputeDocId(std::string_view title, std::string_view body) {
  std::string content;
  content.reserve(title.size() + body.size() + 1);
  content.append(title);
  content.push_back('\n');
  content.append(body);
  return ContentHash128(content);
}

Document Normalize(const RawArticle& article, std::string_view lang,
                   const WorkingText& working, Timestamp fetched_at) {
  Document doc;
  doc.raw = article;
  doc.raw.title = NormalizeWhitespace(article.title);
  doc.raw.body = NormalizeWhitespace(article.body);
  if (doc.raw.title.empty() && doc.raw.body.empty()) {
    throw InvalidInput("article has neither title nor body");
  }
  doc.doc_id = ComputeDocId(doc.raw.title, doc.raw.body);
  doc.lang = std::string(lang);
  doc.working_title = NormalizeWhitespace(working.title);
  doc.working_body = NormalizeWhitespace(working.body);
  doc.fetched_at = fetched_at;
  doc.status = Status::kPending;
  if (working.translation_pending) doc.AddFlag(kFlagTranslationPending);
  if (article.published_at_fallback) doc.AddFlag(kFlagPublishedAtFallback);
  return doc;
}

}  // namespace epiwatch
