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

#include "epiwatch/service/engine.h"

#include <algorithm>
#include <filesystem>
#include <mutex>
#include <thread>
#include <tuple>

#include "epiwatch/ingest/document_json.h"
#include "epiwatch/ingest/normalize.h"
#include "epiwatch/text/counts.h"
#include "epiwatch/util/error.h"
#include "epiwatch/util/text.h"

namespace epiwatch {

namespace {

bool EarlierDoc(const Document& a, const Document& b) {
  return std::tie(a.raw.published_at, a.fetched_at, a.doc_id) <
         std::tie(b.raw.published_at, b.fetched_at, b.doc_id);
}

nlohmann::json PlaceJson(const GeoEntity& e) {
  return {{"geo_id", e.geo_id},
          {"name", e.name},
          {"feature", ToString(e.feature)},
          {"country_code", e.country_code}};
}

}  // namespace

TriageDecision ParseTriageDecision(std::string_view s) {
  if (s == "publish") return TriageDecision::kPublish;
  if (s == "suppress") return TriageDecision::kSuppress;
  throw InvalidInput("decision must be publish or suppress, got " + std::string(s));
}

std::shared_ptr<Resources> Resources::Load(const EngineConfig& config) {
  config.Validate();
  auto r = std::make_shared<Resources>();
  r->gazetteer = Gazetteer::Load(config.Resolve(config.gazetteer));
  r->lexicon = Lexicon::Load(config.Resolve(config.lexicon), config.semantic_types);
  r->blacklist = LoadWordList(config.Resolve(config.blacklist));
  r->titles = TitleLexicon::Load(config.Resolve(config.job_titles));
  r->stop_words = LoadWordList(config.Resolve(config.stop_words));
  r->detector =
      LanguageDetector::FromDirectory(config.Resolve(config.language_profiles), config.languages);
  r->languages.insert(config.languages.begin(), config.languages.end());
  if (config.translator == "http") {
    r->translator =
        std::make_shared<HttpTranslationClient>(config.translator_url, config.translator_timeout_s);
  } else {
    const auto glossary = config.Resolve(config.glossary);
    if (!glossary.empty() && std::filesystem::exists(glossary)) {
      r->translator = std::make_shared<StubTranslationClient>(
          StubTranslationClient::FromGlossary(glossary, &r->detector));
    } else {
      r->translator = std::make_shared<StubTranslationClient>(&r->detector);
    }
  }
  r->model = config.model.empty() ? RelevanceModel::Zero() : RelevanceModel::Load(config.model);
  r->t_low = config.t_low.value_or(r->model.t_low);
  r->t_high = config.t_high.value_or(r->model.t_high);
  Route(0.5, r->t_low, r->t_high);  // validates the pair
  return r;
}

Engine::Engine(EngineConfig config, std::unique_ptr<Store> store)
    : Engine(config, Resources::Load(config), std::move(store)) {}

Engine::Engine(EngineConfig config, std::shared_ptr<const Resources> resources,
               std::unique_ptr<Store> store)
    : config_(std::move(config)),
      resources_(std::move(resources)),
      store_(std::move(store)),
      index_(&resources_->gazetteer, &resources_->lexicon),
      dedup_(config_.dedup),
      tracker_(config_.surprise, config_.change) {
  config_.Validate();
  if (store_) Replay();
}

void Engine::Replay() {
  auto contents = store_->Load();
  std::unique_lock lock(mu_);
  for (auto& stored : contents.docs) {
    next_seq_ = std::max(next_seq_, stored.seq + 1);
    InsertLocked(std::move(stored.doc), stored.seen_feed, stored.seen_key, false);
  }
  for (auto& a : contents.audit) {
    if (Document* d = index_.FindMutable(a.doc_id); d && d->status == a.from) {
      d->TransitionTo(a.to);
    }
    audit_.push_back(std::move(a));
  }
  for (auto& r : contents.reports) reports_[r.report_id] = std::move(r);
  if (contents.narratives) tracker_.LoadJson(*contents.narratives);
}

Document Engine::Analyze(const RawArticle& article, Timestamp fetched_at) const {
  const Resources& res = *resources_;
  const std::string text = NormalizeWhitespace(article.title + "\n" + article.body);
  if (text.empty()) throw InvalidInput("article has neither title nor body");

  std::string lang;
  try {
    lang = res.translator->Detect(text);
  } catch (const std::exception&) {
    lang = res.detector.Detect(text);
  }
  if (!res.languages.contains(lang)) lang = std::string(kUndetermined);

  const WorkingText working = TranslateToWorking(article, lang, *res.translator);
  Document doc = Normalize(article, lang, working, fetched_at);
  doc.keyword_mentions = TagKeywords(doc, res.lexicon, res.blacklist);
  doc.geo_mentions = TagGeo(doc, res.gazetteer);
  doc.entity_mentions = TagEntities(doc, res.titles);
  doc.counts = ExtractCounts(doc);
  const double score = ScoreRelevance(doc, res.model);
  doc.relevance = score;
  // Undetermined language means translation and tagging quality is
  // unknown, so a person decides.
  doc.TransitionTo(lang == kUndetermined ? Status::kTriage : Route(score, res.t_low, res.t_high));
  return doc;
}

IngestOutcome Engine::Ingest(const RawArticle& article, Timestamp fetched_at,
                             const std::string& seen_feed, std::optional<uint64_t> seen_key) {
  return IngestDocument(Analyze(article, fetched_at), seen_feed, seen_key);
}

IngestOutcome Engine::IngestDocument(Document doc, const std::string& seen_feed,
                                     std::optional<uint64_t> seen_key) {
  std::unique_lock lock(mu_);
  return InsertLocked(std::move(doc), seen_feed, seen_key, true);
}

IngestOutcome Engine::InsertLocked(Document doc, const std::string& seen_feed,
                                   std::optional<uint64_t> seen_key, bool persist) {
  IngestOutcome out;
  out.doc_id = doc.doc_id;
  if (seen_key) seen_.Insert(seen_feed, *seen_key);
  if (const Document* existing = index_.Find(doc.doc_id)) {
    out.status = existing->status;
    out.cluster_id = existing->cluster_id.value_or(0);
    return out;
  }
  doc.cluster_id.reset();
  if (persist && store_) {
    StoredDocument stored;
    stored.seq = next_seq_;
    stored.seen_feed = seen_feed;
    stored.seen_key = seen_key;
    stored.doc = doc;
    store_->AppendDocument(stored);
  }
  if (persist) ++next_seq_;
  const ClusterDecision decision = dedup_.Assign(MakeDedupRecord(doc));
  doc.cluster_id = decision.cluster_id;
  const Document* stored = index_.Add(std::move(doc));
  if (decision.duplicate) RefreshClusterIds(decision.cluster_id);
  out.inserted = true;
  out.status = stored->status;
  out.cluster_id = decision.cluster_id;
  out.duplicate = decision.duplicate;
  return out;
}

void Engine::RefreshClusterIds(uint64_t cluster_id) {
  auto cluster = dedup_.Cluster(cluster_id);
  if (!cluster) return;
  for (const auto& id : cluster->member_ids) {
    if (Document* d = index_.FindMutable(id)) d->cluster_id = cluster_id;
  }
}

PollStats Engine::PollFeed(const FeedConfig& feed, Timestamp now) {
  PollStats stats;
  stats.feed_id = feed.feed_id;
  FetchResult fetched;
  try {
    // Keys are marked seen only once the document is stored, so a crash
    // between fetch and store re-fetches the item.
    SeenSet scratch;
    fetched = FetchFeed(feed, nullptr, now);
    std::erase_if(fetched.articles, [&](const RawArticle& a) {
      if (seen_.Contains(feed.feed_id, SeenSet::Key(a.url, a.title)) ||
          !scratch.Insert(feed.feed_id, SeenSet::Key(a.url, a.title))) {
        ++stats.already_seen;
        return true;
      }
      return false;
    });
  } catch (const FetchError& e) {
    stats.error = e.what();
    return stats;
  }
  stats.fetched = fetched.articles.size();
  stats.skipped_items = fetched.skipped_items;
  for (const auto& a : fetched.articles) {
    try {
      auto outcome = Ingest(a, now, feed.feed_id, SeenSet::Key(a.url, a.title));
      if (outcome.inserted) {
        ++stats.ingested;
      } else {
        ++stats.known_documents;
      }
    } catch (const InvalidInput&) {
      seen_.Insert(feed.feed_id, SeenSet::Key(a.url, a.title));
      ++stats.rejected;
    }
  }
  return stats;
}

std::vector<PollStats> Engine::PollFeeds(const std::vector<FeedConfig>& feeds, Timestamp now) {
  std::vector<PollStats> stats(feeds.size());
  std::vector<std::thread> workers;
  workers.reserve(feeds.size());
  for (size_t i = 0; i < feeds.size(); ++i) {
    workers.emplace_back([&, i] { stats[i] = PollFeed(feeds[i], now); });
  }
  for (auto& w : workers) w.join();
  return stats;
}

std::vector<const Document*> Engine::RepresentativesLocked(Date day) const {
  std::vector<const Document*> out;
  std::map<uint64_t, const Document*> earliest;
  for (const Document* d : index_.PublishedOn(day)) {
    if (d->status != Status::kPublished) continue;
    const uint64_t cid = d->cluster_id.value_or(0);
    auto it = earliest.find(cid);
    if (it == earliest.end()) {
      const Document* best = nullptr;
      if (auto cluster = dedup_.Cluster(cid)) {
        for (const auto& id : cluster->member_ids) {
          const Document* m = index_.Find(id);
          if (m && m->status == Status::kPublished && (!best || EarlierDoc(*m, *best))) best = m;
        }
      }
      it = earliest.emplace(cid, best ? best : d).first;
    }
    if (it->second == d) out.push_back(d);
  }
  return out;
}

std::vector<std::string> Engine::DailyRepresentatives(Date day) const {
  std::shared_lock lock(mu_);
  std::vector<std::string> ids;
  for (const Document* d : RepresentativesLocked(day)) ids.push_back(d->doc_id);
  return ids;
}

NarrativeContext Engine::Context() const {
  NarrativeContext ctx;
  ctx.gazetteer = &resources_->gazetteer;
  ctx.lexicon = &resources_->lexicon;
  ctx.stop_words = &resources_->stop_words;
  ctx.lookup = [this](const std::string& id) { return index_.Find(id); };
  return ctx;
}

std::vector<DayResult> Engine::RunDailyBatch(Date day) {
  std::unique_lock lock(mu_);
  std::optional<Date> start;
  if (tracker_.last_day()) {
    start = *tracker_.last_day() + std::chrono::days(1);
  } else {
    start = index_.FirstDate();
  }
  std::vector<DayResult> results;
  if (!start) return results;
  const auto ctx = Context();
  for (Date d = *start; d <= day; d += std::chrono::days(1)) {
    results.push_back(tracker_.RunDay(d, RepresentativesLocked(d), ctx));
  }
  if (!results.empty() && store_) store_->SaveNarratives(tracker_.ToJson());
  return results;
}

nlohmann::json Engine::SearchJson(const Query& q) const {
  std::shared_lock lock(mu_);
  return ToJson(index_.Search(q), q.page, q.page_size);
}

size_t Engine::Count(const Query& q) const {
  std::shared_lock lock(mu_);
  return index_.Match(q).size();
}

std::vector<std::string> Engine::MatchIds(const Query& q) const {
  std::shared_lock lock(mu_);
  std::vector<std::string> ids;
  for (const Document* d : index_.Match(q)) ids.push_back(d->doc_id);
  return ids;
}

KnowledgeGraph Engine::Graph(const Query& q, size_t top_n) const {
  std::shared_lock lock(mu_);
  return BuildKnowledgeGraph(index_.Match(q), resources_->gazetteer, resources_->lexicon, top_n,
                             config_.adjacency_km);
}

nlohmann::json Engine::GraphJson(const Query& q, size_t top_n) const {
  return ToJson(Graph(q, top_n));
}

std::optional<Document> Engine::GetDocument(const std::string& doc_id) const {
  std::shared_lock lock(mu_);
  const Document* d = index_.Find(doc_id);
  if (!d) return std::nullopt;
  return *d;
}

std::optional<DuplicateCluster> Engine::GetCluster(uint64_t cluster_id) const {
  std::shared_lock lock(mu_);
  return dedup_.Cluster(cluster_id);
}

std::vector<std::vector<std::string>> Engine::ClusterPartition() const {
  std::shared_lock lock(mu_);
  std::vector<std::vector<std::string>> groups;
  for (const auto& c : dedup_.Clusters()) groups.push_back(c.member_ids);
  std::sort(groups.begin(), groups.end());
  return groups;
}

Document Engine::Triage(const std::string& doc_id, TriageDecision decision,
                        const std::string& actor) {
  std::unique_lock lock(mu_);
  Document* d = index_.FindMutable(doc_id);
  if (!d) throw NotFound("no document " + doc_id);
  if (d->status != Status::kTriage) {
    throw Conflict("document " + doc_id + " is " + std::string(ToString(d->status)) +
                   ", not in triage");
  }
  AuditRecord a;
  a.doc_id = doc_id;
  a.decision = decision == TriageDecision::kPublish ? "publish" : "suppress";
  a.actor = actor;
  a.at = Now();
  a.from = d->status;
  a.to = decision == TriageDecision::kPublish ? Status::kPublished : Status::kSuppressed;
  if (store_) store_->AppendAudit(a);
  d->TransitionTo(a.to);
  audit_.push_back(std::move(a));
  return *d;
}

std::vector<AuditRecord> Engine::AuditLog() const {
  std::shared_lock lock(mu_);
  return audit_;
}

Report Engine::CreateReport(Report draft) {
  std::unique_lock lock(mu_);
  ValidateReport(draft, [this](const std::string& id) { return index_.Find(id); });
  draft.report_id = reports_.empty() ? 1 : reports_.rbegin()->first + 1;
  draft.created_at = Now();
  if (store_) store_->AppendReport(draft);
  reports_[draft.report_id] = draft;
  return draft;
}

std::optional<Report> Engine::GetReport(uint64_t report_id) const {
  std::shared_lock lock(mu_);
  auto it = reports_.find(report_id);
  if (it == reports_.end()) return std::nullopt;
  return it->second;
}

std::string Engine::ExportReport(uint64_t report_id) const {
  std::shared_lock lock(mu_);
  auto it = reports_.find(report_id);
  if (it == reports_.end()) throw NotFound("no report " + std::to_string(report_id));
  return RenderReportHtml(it->second, [this](const std::string& id) { return index_.Find(id); });
}

nlohmann::json Engine::ListNarratives(Date day) const {
  std::shared_lock lock(mu_);
  auto arr = nlohmann::json::array();
  for (const Narrative* n : tracker_.ListForDate(day)) {
    arr.push_back(NarrativeToJson(*n, &resources_->gazetteer, &resources_->lexicon));
  }
  return arr;
}

std::optional<nlohmann::json> Engine::GetNarrative(uint64_t narrative_id) const {
  std::shared_lock lock(mu_);
  const Narrative* n = tracker_.Find(narrative_id);
  if (!n) return std::nullopt;
  return NarrativeToJson(*n, &resources_->gazetteer, &resources_->lexicon);
}

std::vector<Narrative> Engine::Narratives() const {
  std::shared_lock lock(mu_);
  return tracker_.narratives();
}

nlohmann::json Engine::GeoJson(GeoId id) const {
  const Gazetteer& gaz = resources_->gazetteer;
  const GeoEntity& e = gaz.Get(id);
  auto ancestors = nlohmann::json::array();
  for (GeoId a : gaz.Ancestors(id)) ancestors.push_back(PlaceJson(gaz.Get(a)));
  auto children = nlohmann::json::array();
  for (GeoId c : gaz.Children(id)) children.push_back(PlaceJson(gaz.Get(c)));
  nlohmann::json j = PlaceJson(e);
  j["alt_names"] = e.alt_names;
  j["lat"] = e.lat;
  j["lon"] = e.lon;
  j["population"] = e.population;
  j["parent_id"] = e.parent_id ? nlohmann::json(*e.parent_id) : nlohmann::json(nullptr);
  j["ancestors"] = ancestors;
  j["children"] = children;
  return j;
}

size_t Engine::size() const {
  std::shared_lock lock(mu_);
  return index_.size();
}

}  // namespace epiwatch
