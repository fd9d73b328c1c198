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

#ifndef EPIWATCH_INGEST_FEED_H_
#define EPIWATCH_INGEST_FEED_H_

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "epiwatch/ingest/document.h"

namespace epiwatch {

enum class FeedKind { kRss, kJsonlDrop };

struct FeedConfig {
  std::string feed_id;
  // http(s) URL, file:// URL or local path.
  std::string url;
  FeedKind kind = FeedKind::kRss;
  std::string publisher_country;  // empty when unknown
  int poll_interval_s = 900;
};

// JSON array of feed records. Throws ConfigError on duplicate ids, unknown
// kinds or poll intervals below one second.
std::vector<FeedConfig> ParseFeedConfigs(const nlohmann::json& j);
std::vector<FeedConfig> LoadFeedConfigs(const std::string& path);

// Per-feed set of hashed (url, title) pairs already ingested. Thread-safe.
class SeenSet {
 public:
  static uint64_t Key(std::string_view url, std::string_view title);

  // True when the key was not yet present.
  bool Insert(const std::string& feed_id, uint64_t key);
  bool Contains(const std::string& feed_id, uint64_t key) const;
  size_t size() const;

  // Keys inserted since the last call, for persistence.
  std::vector<std::pair<std::string, uint64_t>> TakeNew();

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::unordered_set<uint64_t>> keys_;
  std::vector<std::pair<std::string, uint64_t>> fresh_;
};

struct FetchResult {
  std::vector<RawArticle> articles;
  size_t skipped_items = 0;   // malformed or empty items
  size_t already_seen = 0;
};

// RSS 2.0 <item> and Atom <entry> elements are parsed one at a time, so a
// malformed item costs only itself. Markup inside descriptions is stripped.
// Appends to `result` without consulting any seen-set.
void ParseFeedXml(std::string_view xml, const FeedConfig& cfg, Timestamp now,
                  FetchResult* result);

// One RawArticle per JSON line.
void ParseJsonlDrop(std::string_view content, const FeedConfig& cfg, Timestamp now,
                    FetchResult* result);

// Reads the feed source. Throws FetchError (retryable) when unreachable.
std::string ReadSource(const std::string& url, double timeout_seconds = 30.0);

// Fetches and parses a feed, dropping items already in `seen` and marking
// the new ones, in feed order.
FetchResult FetchFeed(const FeedConfig& cfg, SeenSet* seen, Timestamp now = Now());

}  // namespace epiwatch

#endif  // EPIWATCH_INGEST_FEED_H_
