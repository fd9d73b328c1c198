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

#ifndef EPIWATCH_INGEST_DOCUMENT_JSON_H_
#define EPIWATCH_INGEST_DOCUMENT_JSON_H_

#include <json.hpp>

#include "epiwatch/ingest/document.h"

namespace epiwatch {

void to_json(nlohmann::json& j, const Span& s);
void from_json(const nlohmann::json& j, Span& s);
void to_json(nlohmann::json& j, const RawArticle& a);
// Missing or unparseable published_at falls back to `now` with the flag set.
RawArticle RawArticleFromJson(const nlohmann::json& j, Timestamp now);

void to_json(nlohmann::json& j, const KeywordMention& m);
void from_json(const nlohmann::json& j, KeywordMention& m);
void to_json(nlohmann::json& j, const GeoMention& m);
void from_json(const nlohmann::json& j, GeoMention& m);
void to_json(nlohmann::json& j, const EntityMention& m);
void from_json(const nlohmann::json& j, EntityMention& m);
void to_json(nlohmann::json& j, const CasualtyCount& c);
void from_json(const nlohmann::json& j, CasualtyCount& c);
void to_json(nlohmann::json& j, const Document& d);
void from_json(const nlohmann::json& j, Document& d);

}  // namespace epiwatch

#endif  // EPIWATCH_INGEST_DOCUMENT_JSON_H_
