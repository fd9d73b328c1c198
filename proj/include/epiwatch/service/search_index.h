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

#ifndef EPIWATCH_SERVICE_SEARCH_INDEX_H_
#define EPIWATCH_SERVICE_SEARCH_INDEX_H_

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "epiwatch/geo/gazetteer.h"
#include "epiwatch/ingest/document.h"
#include "epiwatch/text/lexicon.h"

namespace epiwatch {

inline constexpr size_t kMaxPageSize = 500;
inline constexpr size_t kDefaultPageSize = 20;
inline constexpr size_t kFacetTopN = 20;

struct Query {
  std::vector<std::string> text_terms;  // AND
  std::vector<std::string> keyword_ids;  // AND
  // Matches documents tagged with this place or any place below it.
  std::optional<GeoId> geo_id;
  std::optional<Date> date_from;  // inclusive
  std::optional<Date> date_to;    // inclusive
  std::set<Status> status_filter;  // empty = published and triage
  size_t page = 0;
  size_t page_size = kDefaultPageSize;

  std::set<Status> EffectiveStatuses() const;
  // Throws InvalidInput.
  void Validate() const;
};

// Builds a query from URL-style parameters: q (free text, tokenized),
// keyword and status (repeatable or comma-separated), geo, from, to
// (YYYY-MM-DD), page and page_size. Throws InvalidInput on malformed
// values.
Query ParseQuery(const std::multimap<std::string, std::string>& params);

struct FacetBucket {
  std::string key;
  std::string label;
  size_t count = 0;
};

struct SearchResult {
  size_t total = 0;
  std::vector<const Document*> docs;  // the requested page
  std::map<Date, size_t> by_date;
  std::vector<FacetBucket> by_keyword;
  std::vector<FacetBucket> by_location;
  std::vector<FacetBucket> by_category;
  std::map<GeoId, size_t> map_counts;
};

// Short form of a document for result lists.
nlohmann::json DocumentSummary(const Document& doc);
nlohmann::json ToJson(const SearchResult& r, size_t page, size_t page_size);

// In-memory inverted index that also owns the documents. Postings cover
// working-text tokens, keyword ids and, for every resolved place, the place
// and all of its ancestors. Status and date are filtered against the live
// document. Not thread-safe; the engine serializes writers against
// readers.
class SearchIndex {
 public:
  SearchIndex(const Gazetteer* gazetteer, const Lexicon* lexicon)
      : gazetteer_(gazetteer), lexicon_(lexicon) {}

  // Returns the stored document; an already indexed doc_id is left
  // untouched and its existing record returned.
  const Document* Add(Document doc);
  const Document* Find(const std::string& doc_id) const;
  Document* FindMutable(const std::string& doc_id);

  // Every match, newest first.
  std::vector<const Document*> Match(const Query& q) const;
  SearchResult Search(const Query& q) const;

  // Documents whose published_at falls on `day`, in arrival order.
  std::vector<const Document*> PublishedOn(Date day) const;
  std::optional<Date> FirstDate() const;
  std::optional<Date> LastDate() const;

  const std::deque<Document>& documents() const { return docs_; }
  size_t size() const { return docs_.size(); }

 private:
  const std::vector<uint32_t>* Postings(const std::string& key) const;

  const Gazetteer* gazetteer_;
  const Lexicon* lexicon_;
  std::deque<Document> docs_;
  std::unordered_map<std::string, uint32_t> by_id_;
  std::unordered_map<std::string, std::vector<uint32_t>> postings_;
  std::map<Date, std::vector<uint32_t>> by_day_;
};

}  // namespace epiwatch

#endif  // EPIWATCH_SERVICE_SEARCH_INDEX_H_
