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

#include "epiwatch/service/search_index.h"

#include <algorithm>
#include <charconv>

#include "epiwatch/ingest/document_json.h"
#include "epiwatch/text/tokenize.h"
#include "epiwatch/util/error.h"
#include "epiwatch/util/text.h"

namespace epiwatch {

namespace {

constexpr size_t kSnippetBytes = 240;

std::string TextKey(std::string_view lower) { return "t:" + std::string(lower); }
std::string KeywordKey(std::string_view id) { return "k:" + std::string(id); }
std::string GeoKey(GeoId id) { return "g:" + std::to_string(id); }

std::vector<std::string> SplitValues(const std::multimap<std::string, std::string>& params,
                                     const std::string& key) {
  std::vector<std::string> out;
  auto [lo, hi] = params.equal_range(key);
  for (auto it = lo; it != hi; ++it) {
    for (auto& part : Split(it->second, ',')) {
      auto trimmed = std::string(Trim(part));
      if (!trimmed.empty()) out.push_back(std::move(trimmed));
    }
  }
  return out;
}

std::optional<std::string> Single(const std::multimap<std::string, std::string>& params,
                                  const std::string& key) {
  auto [lo, hi] = params.equal_range(key);
  if (lo == hi) return std::nullopt;
  if (std::next(lo) != hi) throw InvalidInput("parameter " + key + " given more than once");
  auto v = std::string(Trim(lo->second));
  if (v.empty()) return std::nullopt;
  return v;
}

template <typename T>
T ParseNumber(const std::string& key, const std::string& s) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw InvalidInput("parameter " + key + " is not a valid integer: " + s);
  }
  return v;
}

Date ParseQueryDate(const std::string& key, const std::string& s) {
  auto d = ParseDate(s);
  if (!d) throw InvalidInput("parameter " + key + " is not a YYYY-MM-DD date: " + s);
  return *d;
}

std::vector<uint32_t> Intersect(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  std::vector<uint32_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

void AddPosting(std::unordered_map<std::string, std::vector<uint32_t>>* postings,
                const std::string& key, uint32_t idx) {
  auto& list = (*postings)[key];
  if (list.empty() || list.back() != idx) list.push_back(idx);
}

std::vector<FacetBucket> TopBuckets(std::map<std::string, FacetBucket> buckets) {
  std::vector<FacetBucket> out;
  out.reserve(buckets.size());
  for (auto& [key, b] : buckets) out.push_back(std::move(b));
  std::sort(out.begin(), out.end(), [](const FacetBucket& a, const FacetBucket& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.key < b.key;
  });
  if (out.size() > kFacetTopN) out.resize(kFacetTopN);
  return out;
}

nlohmann::json BucketsJson(const std::vector<FacetBucket>& buckets) {
  auto arr = nlohmann::json::array();
  for (const auto& b : buckets) {
    arr.push_back({{"key", b.key}, {"label", b.label}, {"count", b.count}});
  }
  return arr;
}

std::string Snippet(const std::string& body) {
  if (body.size() <= kSnippetBytes) return body;
  size_t cut = kSnippetBytes;
  while (cut > 0 && (static_cast<unsigned char>(body[cut]) & 0xC0) == 0x80) --cut;
  return body.substr(0, cut) + "...";
}

}  // namespace

std::set<Status> Query::EffectiveStatuses() const {
  if (!status_filter.empty()) return status_filter;
  return {Status::kPublished, Status::kTriage};
}

void Query::Validate() const {
  if (date_from && date_to && *date_from > *date_to) {
    throw InvalidInput("date_from must not be after date_to");
  }
  if (page_size < 1 || page_size > kMaxPageSize) {
    throw InvalidInput("page_size must be between 1 and " + std::to_string(kMaxPageSize));
  }
}

Query ParseQuery(const std::multimap<std::string, std::string>& params) {
  Query q;
  auto [lo, hi] = params.equal_range("q");
  for (auto it = lo; it != hi; ++it) {
    for (auto& t : LowerTokens(it->second)) q.text_terms.push_back(std::move(t));
  }
  q.keyword_ids = SplitValues(params, "keyword");
  if (auto g = Single(params, "geo")) q.geo_id = ParseNumber<GeoId>("geo", *g);
  if (auto f = Single(params, "from")) q.date_from = ParseQueryDate("from", *f);
  if (auto t = Single(params, "to")) q.date_to = ParseQueryDate("to", *t);
  for (const auto& s : SplitValues(params, "status")) {
    if (s == "published") {
      q.status_filter.insert(Status::kPublished);
    } else if (s == "triage") {
      q.status_filter.insert(Status::kTriage);
    } else if (s == "suppressed") {
      q.status_filter.insert(Status::kSuppressed);
    } else {
      throw InvalidInput("status must be published, triage or suppressed, got " + s);
    }
  }
  if (auto p = Single(params, "page")) q.page = ParseNumber<size_t>("page", *p);
  if (auto p = Single(params, "page_size")) q.page_size = ParseNumber<size_t>("page_size", *p);
  q.Validate();
  return q;
}

nlohmann::json DocumentSummary(const Document& doc) {
  nlohmann::json j = {
      {"doc_id", doc.doc_id},
      {"title", doc.working_title},
      {"original_title", doc.raw.title},
      {"snippet", Snippet(doc.working_body)},
      {"url", doc.raw.url},
      {"source_feed", doc.raw.source_feed},
      {"lang", doc.lang},
      {"published_at", FormatTimestamp(doc.raw.published_at)},
      {"status", ToString(doc.status)},
      {"relevance", nullptr},
      {"cluster_id", nullptr},
      {"flags", doc.flags},
  };
  if (doc.relevance) j["relevance"] = *doc.relevance;
  if (doc.cluster_id) j["cluster_id"] = *doc.cluster_id;
  return j;
}

nlohmann::json ToJson(const SearchResult& r, size_t page, size_t page_size) {
  auto docs = nlohmann::json::array();
  for (const Document* d : r.docs) docs.push_back(DocumentSummary(*d));
  auto by_date = nlohmann::json::object();
  for (const auto& [day, n] : r.by_date) by_date[FormatDate(day)] = n;
  auto map_counts = nlohmann::json::object();
  for (const auto& [id, n] : r.map_counts) map_counts[std::to_string(id)] = n;
  return {
      {"total", r.total},
      {"page", page},
      {"page_size", page_size},
      {"docs", docs},
      {"facets",
       {{"by_date", by_date},
        {"by_keyword", BucketsJson(r.by_keyword)},
        {"by_location", BucketsJson(r.by_location)},
        {"by_category", BucketsJson(r.by_category)}}},
      {"map_counts", map_counts},
  };
}

const Document* SearchIndex::Add(Document doc) {
  if (auto it = by_id_.find(doc.doc_id); it != by_id_.end()) return &docs_[it->second];
  const auto idx = static_cast<uint32_t>(docs_.size());
  docs_.push_back(std::move(doc));
  const Document& d = docs_.back();
  by_id_.emplace(d.doc_id, idx);

  for (Field f : {Field::kTitle, Field::kBody}) {
    for (const auto& tok : LowerTokens(d.working(f))) AddPosting(&postings_, TextKey(tok), idx);
  }
  for (const auto& m : d.keyword_mentions) AddPosting(&postings_, KeywordKey(m.canonical_id), idx);
  for (const auto& m : d.geo_mentions) {
    if (m.method == ResolveMethod::kUnresolved || !gazetteer_->Find(m.resolved)) continue;
    AddPosting(&postings_, GeoKey(m.resolved), idx);
    for (GeoId a : gazetteer_->Ancestors(m.resolved)) AddPosting(&postings_, GeoKey(a), idx);
  }
  by_day_[DateOf(d.raw.published_at)].push_back(idx);
  return &d;
}

const Document* SearchIndex::Find(const std::string& doc_id) const {
  auto it = by_id_.find(doc_id);
  return it == by_id_.end() ? nullptr : &docs_[it->second];
}

Document* SearchIndex::FindMutable(const std::string& doc_id) {
  auto it = by_id_.find(doc_id);
  return it == by_id_.end() ? nullptr : &docs_[it->second];
}

const std::vector<uint32_t>* SearchIndex::Postings(const std::string& key) const {
  auto it = postings_.find(key);
  return it == postings_.end() ? nullptr : &it->second;
}

std::vector<const Document*> SearchIndex::Match(const Query& q) const {
  q.Validate();
  if (q.geo_id && !gazetteer_->Find(*q.geo_id)) {
    throw InvalidInput("unknown geo_id " + std::to_string(*q.geo_id));
  }
  std::vector<std::string> keys;
  for (const auto& t : q.text_terms) keys.push_back(TextKey(ToLowerUtf8(t)));
  for (const auto& k : q.keyword_ids) keys.push_back(KeywordKey(k));
  if (q.geo_id) keys.push_back(GeoKey(*q.geo_id));

  std::vector<const std::vector<uint32_t>*> lists;
  for (const auto& k : keys) {
    const auto* list = Postings(k);
    if (!list) return {};
    lists.push_back(list);
  }
  std::sort(lists.begin(), lists.end(),
            [](const auto* a, const auto* b) { return a->size() < b->size(); });

  std::vector<uint32_t> candidates;
  if (lists.empty()) {
    // Restrict by date through the day index when there are no postings.
    auto lo = q.date_from ? by_day_.lower_bound(*q.date_from) : by_day_.begin();
    auto hi = q.date_to ? by_day_.upper_bound(*q.date_to) : by_day_.end();
    for (auto it = lo; it != hi; ++it) {
      candidates.insert(candidates.end(), it->second.begin(), it->second.end());
    }
    std::sort(candidates.begin(), candidates.end());
  } else {
    candidates = *lists[0];
    for (size_t i = 1; i < lists.size() && !candidates.empty(); ++i) {
      candidates = Intersect(candidates, *lists[i]);
    }
  }

  const auto statuses = q.EffectiveStatuses();
  std::vector<uint32_t> hits;
  for (uint32_t idx : candidates) {
    const Document& d = docs_[idx];
    if (!statuses.contains(d.status)) continue;
    const Date day = DateOf(d.raw.published_at);
    if (q.date_from && day < *q.date_from) continue;
    if (q.date_to && day > *q.date_to) continue;
    hits.push_back(idx);
  }
  std::sort(hits.begin(), hits.end(), [this](uint32_t a, uint32_t b) {
    const auto ta = docs_[a].raw.published_at, tb = docs_[b].raw.published_at;
    if (ta != tb) return ta > tb;
    return a > b;
  });
  std::vector<const Document*> out;
  out.reserve(hits.size());
  for (uint32_t idx : hits) out.push_back(&docs_[idx]);
  return out;
}

SearchResult SearchIndex::Search(const Query& q) const {
  const auto matches = Match(q);
  SearchResult r;
  r.total = matches.size();
  const size_t begin = std::min(matches.size(), q.page * q.page_size);
  const size_t end = std::min(matches.size(), begin + q.page_size);
  r.docs.assign(matches.begin() + begin, matches.begin() + end);

  std::map<std::string, FacetBucket> keywords, locations, categories;
  for (const Document* d : matches) {
    ++r.by_date[DateOf(d->raw.published_at)];
    std::set<std::string> kw, cat;
    for (const auto& m : d->keyword_mentions) {
      kw.insert(m.canonical_id);
      if (const auto* e = lexicon_->Find(m.canonical_id)) cat.insert(e->semantic_type);
    }
    for (const auto& id : kw) {
      auto& b = keywords[id];
      b.key = id;
      const auto* e = lexicon_->Find(id);
      b.label = e ? e->preferred_name : id;
      ++b.count;
    }
    for (const auto& c : cat) {
      auto& b = categories[c];
      b.key = b.label = c;
      ++b.count;
    }
    std::set<GeoId> places;
    for (const auto& m : d->geo_mentions) {
      if (m.method != ResolveMethod::kUnresolved && gazetteer_->Find(m.resolved)) {
        places.insert(m.resolved);
      }
    }
    for (GeoId id : places) {
      ++r.map_counts[id];
      auto key = std::to_string(id);
      auto& b = locations[key];
      b.key = key;
      b.label = gazetteer_->Get(id).name;
      ++b.count;
    }
  }
  r.by_keyword = TopBuckets(std::move(keywords));
  r.by_location = TopBuckets(std::move(locations));
  r.by_category = TopBuckets(std::move(categories));
  return r;
}

std::vector<const Document*> SearchIndex::PublishedOn(Date day) const {
  std::vector<const Document*> out;
  auto it = by_day_.find(day);
  if (it == by_day_.end()) return out;
  for (uint32_t idx : it->second) out.push_back(&docs_[idx]);
  return out;
}

std::optional<Date> SearchIndex::FirstDate() const {
  if (by_day_.empty()) return std::nullopt;
  return by_day_.begin()->first;
}

std::optional<Date> SearchIndex::LastDate() const {
  if (by_day_.empty()) return std::nullopt;
  return by_day_.rbegin()->first;
}

}  // namespace epiwatch
