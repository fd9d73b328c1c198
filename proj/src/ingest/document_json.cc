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

#include "epiwatch/ingest/document_json.h"

#include "epiwatch/util/error.h"

namespace epiwatch {

using nlohmann::json;

void to_json(json& j, const Span& s) { j = json::array({s.begin, s.end}); }

void from_json(const json& j, Span& s) {
  s.begin = j.at(0).get<size_t>();
  s.end = j.at(1).get<size_t>();
}

void to_json(json& j, const RawArticle& a) {
  j = json{{"source_feed", a.source_feed},
           {"url", a.url},
           {"title", a.title},
           {"body", a.body},
           {"published_at", FormatTimestamp(a.published_at)},
           {"publisher_country",
            a.publisher_country.empty() ? "unknown" : a.publisher_country}};
  if (a.published_at_fallback) j["published_at_fallback"] = true;
}

RawArticle RawArticleFromJson(const json& j, Timestamp now) {
  if (!j.is_object()) throw InvalidInput("article record is not an object");
  RawArticle a;
  a.source_feed = j.value("source_feed", "");
  a.url = j.value("url", "");
  a.title = j.value("title", "");
  a.body = j.value("body", "");
  a.publisher_country = j.value("publisher_country", "");
  if (a.publisher_country == "unknown") a.publisher_country.clear();
  std::optional<Timestamp> published;
  if (auto it = j.find("published_at"); it != j.end() && it->is_string()) {
    published = ParseTimestamp(it->get<std::string>());
  }
  if (published) {
    a.published_at = *published;
    a.published_at_fallback = j.value("published_at_fallback", false);
  } else {
    a.published_at = now;
    a.published_at_fallback = true;
  }
  return a;
}

void to_json(json& j, const KeywordMention& m) {
  j = json{{"canonical_id", m.canonical_id},
           {"surface", m.surface},
           {"span", m.span},
           {"field", ToString(m.field)}};
}

void from_json(const json& j, KeywordMention& m) {
  m.canonical_id = j.at("canonical_id").get<std::string>();
  m.surface = j.at("surface").get<std::string>();
  m.span = j.at("span").get<Span>();
  m.field = ParseField(j.at("field").get<std::string>());
}

void to_json(json& j, const GeoMention& m) {
  j = json{{"surface", m.surface},
           {"span", m.span},
           {"field", ToString(m.field)},
           {"method", ToString(m.method)}};
  j["resolved"] = m.method == ResolveMethod::kUnresolved ? json(nullptr)
                                                          : json(m.resolved);
}

void from_json(const json& j, GeoMention& m) {
  m.surface = j.at("surface").get<std::string>();
  m.span = j.at("span").get<Span>();
  m.field = ParseField(j.at("field").get<std::string>());
  m.method = ParseResolveMethod(j.at("method").get<std::string>());
  const auto& r = j.at("resolved");
  m.resolved = r.is_null() ? 0 : r.get<int64_t>();
}

void to_json(json& j, const EntityMention& m) {
  j = json{{"kind", m.kind == EntityKind::kPerson ? "person" : "organization"},
           {"name", m.name},
           {"span", m.span},
           {"field", ToString(m.field)}};
  j["title_phrase"] = m.title_phrase ? json(*m.title_phrase) : json(nullptr);
}

void from_json(const json& j, EntityMention& m) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "person") {
    m.kind = EntityKind::kPerson;
  } else if (kind == "organization") {
    m.kind = EntityKind::kOrganization;
  } else {
    throw InvalidInput("unknown entity kind: " + kind);
  }
  m.name = j.at("name").get<std::string>();
  m.span = j.at("span").get<Span>();
  m.field = ParseField(j.at("field").get<std::string>());
  const auto& t = j.at("title_phrase");
  if (t.is_null()) {
    m.title_phrase.reset();
  } else {
    m.title_phrase = t.get<std::string>();
  }
}

void to_json(json& j, const CasualtyCount& c) {
  j = json{{"category", ToString(c.category)},
           {"value", c.value},
           {"span", c.span},
           {"field", ToString(c.field)}};
}

void from_json(const json& j, CasualtyCount& c) {
  c.category = ParseCountCategory(j.at("category").get<std::string>());
  c.value = j.at("value").get<uint64_t>();
  c.span = j.at("span").get<Span>();
  c.field = ParseField(j.value("field", "body"));
}

void to_json(json& j, const Document& d) {
  j = json{{"doc_id", d.doc_id},
           {"raw", d.raw},
           {"lang", d.lang},
           {"working_title", d.working_title},
           {"working_body", d.working_body},
           {"fetched_at", FormatTimestamp(d.fetched_at)},
           {"status", ToString(d.status)},
           {"flags", d.flags},
           {"keyword_mentions", d.keyword_mentions},
           {"geo_mentions", d.geo_mentions},
           {"entity_mentions", d.entity_mentions},
           {"counts", d.counts}};
  j["relevance"] = d.relevance ? json(*d.relevance) : json(nullptr);
  j["cluster_id"] = d.cluster_id ? json(*d.cluster_id) : json(nullptr);
}

void from_json(const json& j, Document& d) {
  d.doc_id = j.at("doc_id").get<std::string>();
  const auto fetched = ParseTimestamp(j.at("fetched_at").get<std::string>());
  if (!fetched) throw InvalidInput("bad fetched_at in document " + d.doc_id);
  d.fetched_at = *fetched;
  d.raw = RawArticleFromJson(j.at("raw"), d.fetched_at);
  d.lang = j.at("lang").get<std::string>();
  d.working_title = j.at("working_title").get<std::string>();
  d.working_body = j.at("working_body").get<std::string>();
  d.status = ParseStatus(j.at("status").get<std::string>());
  d.flags = j.value("flags", std::vector<std::string>{});
  d.keyword_mentions = j.value("keyword_mentions", std::vector<KeywordMention>{});
  d.geo_mentions = j.value("geo_mentions", std::vector<GeoMention>{});
  d.entity_mentions = j.value("entity_mentions", std::vector<EntityMention>{});
  d.counts = j.value("counts", std::vector<CasualtyCount>{});
  const auto rel = j.value("relevance", json(nullptr));
  if (rel.is_null()) {
    d.relevance.reset();
  } else {
    d.relevance = rel.get<double>();
  }
  const auto cid = j.value("cluster_id", json(nullptr));
  if (cid.is_null()) {
    d.cluster_id.reset();
  } else {
    d.cluster_id = cid.get<uint64_t>();
  }
}

}  // namespace epiwatch
