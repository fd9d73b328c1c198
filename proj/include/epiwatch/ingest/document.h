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

#ifndef EPIWATCH_INGEST_DOCUMENT_H_
#define EPIWATCH_INGEST_DOCUMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "epiwatch/util/time.h"

namespace epiwatch {

// Byte offsets [begin, end) into one text field.
struct Span {
  size_t begin = 0;
  size_t end = 0;

  size_t size() const { return end - begin; }
  bool operator==(const Span&) const = default;
};

enum class Field { kTitle, kBody };

enum class Status { kPending, kPublished, kTriage, kSuppressed };

std::string_view ToString(Field f);
std::string_view ToString(Status s);
Field ParseField(std::string_view s);
Status ParseStatus(std::string_view s);

// pending -> {published, triage, suppressed}; triage -> {published, suppressed}.
bool IsValidTransition(Status from, Status to);

struct RawArticle {
  std::string source_feed;
  std::string url;
  std::string title;
  std::string body;
  Timestamp published_at{};
  // ISO-3166 alpha-2; empty when unknown.
  std::string publisher_country;
  // Set when published_at could not be parsed and fetch time was used.
  bool published_at_fallback = false;
};

struct KeywordMention {
  std::string canonical_id;
  std::string surface;
  Span span;
  Field field = Field::kBody;
};

enum class ResolveMethod { kUnique, kPublisherCountry, kPopulation, kUnresolved };
std::string_view ToString(ResolveMethod m);
ResolveMethod ParseResolveMethod(std::string_view s);

struct GeoMention {
  std::string surface;
  Span span;
  Field field = Field::kBody;
  // Meaningless when method is kUnresolved.
  int64_t resolved = 0;
  ResolveMethod method = ResolveMethod::kUnresolved;
};

enum class EntityKind { kPerson, kOrganization };

struct EntityMention {
  EntityKind kind = EntityKind::kPerson;
  std::string name;
  std::optional<std::string> title_phrase;
  Span span;
  Field field = Field::kBody;
};

enum class CountCategory { kDeaths, kCases, kHospitalized };
std::string_view ToString(CountCategory c);
CountCategory ParseCountCategory(std::string_view s);

struct CasualtyCount {
  CountCategory category = CountCategory::kDeaths;
  uint64_t value = 0;
  Span span;
  Field field = Field::kBody;

  bool SameMeasure(const CasualtyCount& o) const {
    return category == o.category && value == o.value;
  }
};

inline constexpr std::string_view kFlagTranslationPending = "translation_pending";
inline constexpr std::string_view kFlagPublishedAtFallback = "published_at_fallback";

struct Document {
  std::string doc_id;
  RawArticle raw;
  std::string lang;
  std::string working_title;
  std::string working_body;
  Timestamp fetched_at{};
  Status status = Status::kPending;
  std::optional<double> relevance;
  std::vector<std::string> flags;

  std::vector<KeywordMention> keyword_mentions;
  std::vector<GeoMention> geo_mentions;
  std::vector<EntityMention> entity_mentions;
  std::vector<CasualtyCount> counts;
  std::optional<uint64_t> cluster_id;

  const std::string& working(Field f) const {
    return f == Field::kTitle ? working_title : working_body;
  }
  bool HasFlag(std::string_view flag) const;
  void AddFlag(std::string_view flag);

  // Throws Conflict when the transition is not allowed.
  void TransitionTo(Status next);
};

}  // namespace epiwatch

#endif  // EPIWATCH_INGEST_DOCUMENT_H_
