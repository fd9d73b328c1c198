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

#ifndef EPIWATCH_SERVICE_ENGINE_H_
#define EPIWATCH_SERVICE_ENGINE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "epiwatch/dedup/cluster_index.h"
#include "epiwatch/geo/gazetteer.h"
#include "epiwatch/ingest/feed.h"
#include "epiwatch/ingest/language.h"
#include "epiwatch/ingest/translation.h"
#include "epiwatch/narratives/narratives.h"
#include "epiwatch/service/config.h"
#include "epiwatch/service/report.h"
#include "epiwatch/service/search_index.h"
#include "epiwatch/service/store.h"
#include "epiwatch/text/entities.h"
#include "epiwatch/text/lexicon.h"
#include "epiwatch/text/relevance.h"

namespace epiwatch {

// Read-only analysis resources shared by all pipeline stages.
struct Resources {
  Gazetteer gazetteer;
  Lexicon lexicon;
  std::unordered_set<std::string> blacklist;
  TitleLexicon titles;
  std::unordered_set<std::string> stop_words;
  LanguageDetector detector;
  std::shared_ptr<TranslationClient> translator;
  RelevanceModel model = RelevanceModel::Zero(1);
  std::set<std::string> languages;
  double t_low = kDefaultLowThreshold;
  double t_high = kDefaultHighThreshold;

  // Throws ConfigError for missing or malformed resource files.
  static std::shared_ptr<Resources> Load(const EngineConfig& config);
};

struct IngestOutcome {
  std::string doc_id;
  bool inserted = false;  // false when the doc_id was already stored
  Status status = Status::kPending;
  uint64_t cluster_id = 0;
  bool duplicate = false;
};

struct PollStats {
  std::string feed_id;
  size_t fetched = 0;
  size_t ingested = 0;
  size_t known_documents = 0;
  size_t skipped_items = 0;
  size_t already_seen = 0;
  size_t rejected = 0;
  std::optional<std::string> error;  // fetch failure, retry later
};

enum class TriageDecision { kPublish, kSuppress };
// Throws InvalidInput for anything but "publish" and "suppress".
TriageDecision ParseTriageDecision(std::string_view s);

// The surveillance engine: ingest pipeline, persistent store, search index,
// duplicate clusters and narrative tracker. One writer at a time (ingest,
// triage, reports, daily batch); any number of concurrent readers, each
// seeing whole documents only.
class Engine {
 public:
  // `store` may be null for a purely in-memory engine. Existing store
  // contents are replayed.
  Engine(EngineConfig config, std::shared_ptr<const Resources> resources,
         std::unique_ptr<Store> store);
  Engine(EngineConfig config, std::unique_ptr<Store> store);

  // Language detection, translation, normalization, tagging and relevance
  // routing. Pure; throws InvalidInput for an article without text.
  Document Analyze(const RawArticle& article, Timestamp fetched_at) const;

  // Analyze, then cluster, persist and index the document. A doc_id already
  // stored is a no-op.
  IngestOutcome Ingest(const RawArticle& article, Timestamp fetched_at,
                       const std::string& seen_feed = "",
                       std::optional<uint64_t> seen_key = std::nullopt);
  IngestOutcome IngestDocument(Document doc, const std::string& seen_feed = "",
                               std::optional<uint64_t> seen_key = std::nullopt);

  // Fetches one feed and ingests its new items in order.
  PollStats PollFeed(const FeedConfig& feed, Timestamp now);
  // Polls all feeds concurrently.
  std::vector<PollStats> PollFeeds(const std::vector<FeedConfig>& feeds, Timestamp now);

  // Published cluster representatives dated `day`: for every cluster, its
  // earliest published member, counted on that member's date only.
  std::vector<std::string> DailyRepresentatives(Date day) const;
  // Runs the narrative batch for every day after the last processed one
  // (or from the first document date) through `day`.
  std::vector<DayResult> RunDailyBatch(Date day);

  nlohmann::json SearchJson(const Query& q) const;
  size_t Count(const Query& q) const;
  // All matches, newest first.
  std::vector<std::string> MatchIds(const Query& q) const;
  nlohmann::json GraphJson(const Query& q, size_t top_n) const;
  KnowledgeGraph Graph(const Query& q, size_t top_n) const;

  std::optional<Document> GetDocument(const std::string& doc_id) const;
  std::optional<DuplicateCluster> GetCluster(uint64_t cluster_id) const;
  // Partition of all stored doc_ids, each group sorted, groups sorted.
  std::vector<std::vector<std::string>> ClusterPartition() const;

  // Throws NotFound or, when the document is not in triage, Conflict.
  Document Triage(const std::string& doc_id, TriageDecision decision,
                  const std::string& actor);
  std::vector<AuditRecord> AuditLog() const;

  // Assigns id and creation time. Throws ValidationError.
  Report CreateReport(Report draft);
  std::optional<Report> GetReport(uint64_t report_id) const;
  // Throws NotFound.
  std::string ExportReport(uint64_t report_id) const;

  nlohmann::json ListNarratives(Date day) const;
  std::optional<nlohmann::json> GetNarrative(uint64_t narrative_id) const;
  std::vector<Narrative> Narratives() const;

  // Entity with ancestors and children. Throws NotFound.
  nlohmann::json GeoJson(GeoId id) const;

  size_t size() const;
  const Resources& resources() const { return *resources_; }
  const EngineConfig& config() const { return config_; }
  bool persistent() const { return store_ != nullptr; }

 private:
  void Replay();
  IngestOutcome InsertLocked(Document doc, const std::string& seen_feed,
                             std::optional<uint64_t> seen_key, bool persist);
  void RefreshClusterIds(uint64_t cluster_id);
  std::vector<const Document*> RepresentativesLocked(Date day) const;
  NarrativeContext Context() const;

  EngineConfig config_;
  std::shared_ptr<const Resources> resources_;
  std::unique_ptr<Store> store_;

  mutable std::shared_mutex mu_;
  SearchIndex index_;
  DedupIndex dedup_;
  NarrativeTracker tracker_;
  SeenSet seen_;
  std::vector<AuditRecord> audit_;
  std::map<uint64_t, Report> reports_;
  uint64_t next_seq_ = 1;
};

}  // namespace epiwatch

#endif  // EPIWATCH_SERVICE_ENGINE_H_
