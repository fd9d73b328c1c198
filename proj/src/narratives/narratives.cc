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

#include "epiwatch/narratives/narratives.h"

#include <algorithm>
#include <cmath>

#include "epiwatch/text/summarize.h"
#include "epiwatch/util/error.h"

namespace epiwatch {

using nlohmann::json;

void SurpriseParams::Validate() const {
  if (window_days < 1) throw ConfigError("window_days must be >= 1");
  if (!(p_threshold > 0.0 && p_threshold < 1.0))
    throw ConfigError("p_threshold must lie in (0, 1)");
  if (c_min < 1) throw ConfigError("c_min must be >= 1");
  if (!(lambda_floor > 0.0)) throw ConfigError("lambda_floor must be positive");
}

std::string_view ToString(NarrativeStatus s) {
  switch (s) {
    case NarrativeStatus::kActive: return "active";
    case NarrativeStatus::kDormant: return "dormant";
    case NarrativeStatus::kClosed: return "closed";
  }
  return "active";
}

namespace {

NarrativeStatus ParseNarrativeStatus(std::string_view s) {
  if (s == "active") return NarrativeStatus::kActive;
  if (s == "dormant") return NarrativeStatus::kDormant;
  if (s == "closed") return NarrativeStatus::kClosed;
  throw InvalidInput("unknown narrative status: " + std::string(s));
}

Date RequireDate(const json& j) {
  auto d = ParseDate(j.get<std::string>());
  if (!d) throw InvalidInput("bad date: " + j.get<std::string>());
  return *d;
}

}  // namespace

std::set<PairKey> DocumentPairs(const Document& doc, const Gazetteer& gaz,
                                const Lexicon& lexicon) {
  std::set<std::string> keywords;
  for (const auto& m : doc.keyword_mentions) {
    const auto* e = lexicon.Find(m.canonical_id);
    if (e && !e->generic) keywords.insert(m.canonical_id);
  }
  std::set<GeoId> locations;
  for (const auto& g : doc.geo_mentions) {
    if (g.method == ResolveMethod::kUnresolved || !gaz.Find(g.resolved)) continue;
    locations.insert(g.resolved);
    for (GeoId a : gaz.Ancestors(g.resolved)) locations.insert(a);
  }
  std::set<PairKey> pairs;
  for (const auto& k : keywords) {
    for (GeoId loc : locations) pairs.insert({k, loc});
  }
  return pairs;
}

PairCounts DailyPairCounts(const std::vector<const Document*>& docs,
                           const Gazetteer& gaz, const Lexicon& lexicon) {
  PairCounts counts;
  for (const Document* d : docs) {
    for (const auto& key : DocumentPairs(*d, gaz, lexicon)) ++counts[key];
  }
  return counts;
}

void PairHistory::Record(Date day, const PairCounts& counts) { days_[day] = counts; }

double PairHistory::TrailingMean(const PairKey& key, Date day, int window) const {
  const Date from = day - std::chrono::days{window};
  int64_t total = 0;
  int covered = 0;
  for (auto it = days_.lower_bound(from); it != days_.end() && it->first < day; ++it) {
    ++covered;
    if (auto c = it->second.find(key); c != it->second.end()) total += c->second;
  }
  return covered == 0 ? 0.0 : static_cast<double>(total) / covered;
}

json PairHistory::ToJson() const {
  json days = json::array();
  for (const auto& [day, counts] : days_) {
    json pairs = json::array();
    for (const auto& [key, n] : counts) pairs.push_back({key.keyword, key.location, n});
    days.push_back({{"date", FormatDate(day)}, {"pairs", std::move(pairs)}});
  }
  return days;
}

PairHistory PairHistory::FromJson(const json& j) {
  PairHistory h;
  for (const auto& day : j) {
    PairCounts counts;
    for (const auto& p : day.at("pairs")) {
      counts[{p.at(0).get<std::string>(), p.at(1).get<GeoId>()}] = p.at(2).get<int64_t>();
    }
    h.days_[RequireDate(day.at("date"))] = std::move(counts);
  }
  return h;
}

std::vector<PairKey> DetectNarratives(const PairCounts& today,
                                      const PairHistory& history, Date day,
                                      const SurpriseParams& params,
                                      const std::set<PairKey>& open_pairs) {
  params.Validate();
  std::vector<PairKey> flagged;
  for (const auto& [key, count] : today) {
    if (count < params.c_min || open_pairs.contains(key)) continue;
    const double rate = std::max(params.lambda_floor,
                                 history.TrailingMean(key, day, params.window_days));
    if (PoissonTail(static_cast<uint64_t>(count), rate) < params.p_threshold) {
      flagged.push_back(key);
    }
  }
  return flagged;
}

std::map<Date, double> ChangeDivergence(const Narrative& n, const ChangeParams& params) {
  std::map<Date, double> out;
  const int w = params.window_days;
  if (w < 1 || n.daily_counts.empty()) return out;
  std::vector<Date> days;
  for (const auto& [d, c] : n.daily_counts) days.push_back(d);
  const int span = static_cast<int>(days.size());
  if (span < 2 * w) return out;

  auto window_terms = [&](int from, int to) {
    TermCounts terms;
    for (int i = from; i < to; ++i) {
      auto it = n.daily_terms.find(days[i]);
      if (it == n.daily_terms.end()) continue;
      for (const auto& [t, c] : it->second) terms[t] += c;
    }
    return terms;
  };
  for (int i = w; i + w <= span; ++i) {
    out[days[i]] = JensenShannon(window_terms(i - w, i), window_terms(i, i + w));
  }
  return out;
}

std::vector<Date> DetectChangePoints(const Narrative& n, const ChangeParams& params) {
  const auto series = ChangeDivergence(n, params);
  std::vector<Date> points;
  for (auto it = series.begin(); it != series.end(); ++it) {
    const double v = it->second;
    if (!(v > params.threshold)) continue;
    if (it != series.begin() && !(v > std::prev(it)->second)) continue;
    if (std::next(it) != series.end() && !(v > std::next(it)->second)) continue;
    points.push_back(it->first);
  }
  return points;
}

void UpdateNarrative(Narrative* n, Date day,
                     const std::vector<const Document*>& todays_docs,
                     const NarrativeContext& ctx, const ChangeParams& change) {
  if (n->status == NarrativeStatus::kClosed) {
    throw InvalidInput("cannot update a closed narrative");
  }
  if (day < n->opened_on) throw InvalidInput("update precedes narrative opening");
  if (!n->daily_counts.empty() && day < n->daily_counts.rbegin()->first) {
    throw InvalidInput("narrative updates must be chronological");
  }

  Date next = n->daily_counts.empty() ? n->opened_on
                                      : n->daily_counts.rbegin()->first + std::chrono::days{1};
  for (; next < day; next += std::chrono::days{1}) {
    n->daily_counts[next] = 0;
    ++n->zero_streak;
  }

  std::set<std::string> members(n->member_docs.begin(), n->member_docs.end());
  int64_t added = 0;
  auto& terms = n->daily_terms[day];
  for (const Document* d : todays_docs) {
    if (!members.insert(d->doc_id).second) continue;
    n->member_docs.push_back(d->doc_id);
    ++added;
    if (ctx.stop_words) {
      for (auto& w : ContentWords(d->working_title, *ctx.stop_words)) ++terms[w];
      for (auto& w : ContentWords(d->working_body, *ctx.stop_words)) ++terms[w];
    }
  }
  if (terms.empty()) n->daily_terms.erase(day);
  n->daily_counts[day] += added;

  if (added > 0) {
    n->zero_streak = 0;
    n->status = NarrativeStatus::kActive;
    n->last_activity = day;
    if (ctx.lookup && ctx.lexicon && ctx.stop_words) {
      std::vector<const Document*> docs;
      for (const auto& id : n->member_docs) {
        if (const Document* d = ctx.lookup(id)) docs.push_back(d);
      }
      if (!docs.empty()) {
        n->summary = Summarize(docs, {n->key.keyword}, *ctx.lexicon, *ctx.stop_words,
                               kSummarySentences);
      }
    }
  } else if (n->daily_counts[day] == 0) {
    ++n->zero_streak;
  }
  if (n->zero_streak >= kClosedAfterZeroDays) {
    n->status = NarrativeStatus::kClosed;
  } else if (n->zero_streak >= kDormantAfterZeroDays) {
    n->status = NarrativeStatus::kDormant;
  }

  std::set<Date> points(n->change_points.begin(), n->change_points.end());
  for (Date d : DetectChangePoints(*n, change)) points.insert(d);
  n->change_points.assign(points.begin(), points.end());
}

json NarrativeToJson(const Narrative& n, const Gazetteer* gaz, const Lexicon* lexicon,
                     bool with_state) {
  json key{{"keyword", n.key.keyword}, {"location", n.key.location}};
  if (lexicon) {
    if (const auto* e = lexicon->Find(n.key.keyword)) key["keyword_name"] = e->preferred_name;
  }
  if (gaz) {
    if (const auto* g = gaz->Find(n.key.location)) key["location_name"] = g->name;
  }
  json counts = json::object();
  for (const auto& [d, c] : n.daily_counts) counts[FormatDate(d)] = c;
  json points = json::array();
  for (Date d : n.change_points) points.push_back(FormatDate(d));
  json j{{"narrative_id", n.narrative_id},
         {"key", std::move(key)},
         {"opened_on", FormatDate(n.opened_on)},
         {"status", ToString(n.status)},
         {"daily_counts", std::move(counts)},
         {"member_docs", n.member_docs},
         {"change_points", std::move(points)},
         {"summary", n.summary}};
  if (with_state) {
    json terms = json::object();
    for (const auto& [d, t] : n.daily_terms) terms[FormatDate(d)] = t;
    j["daily_terms"] = std::move(terms);
    j["zero_streak"] = n.zero_streak;
    j["last_activity"] = FormatDate(n.last_activity);
  }
  return j;
}

Narrative NarrativeFromJson(const json& j) {
  Narrative n;
  n.narrative_id = j.at("narrative_id").get<uint64_t>();
  n.key.keyword = j.at("key").at("keyword").get<std::string>();
  n.key.location = j.at("key").at("location").get<GeoId>();
  n.opened_on = RequireDate(j.at("opened_on"));
  n.status = ParseNarrativeStatus(j.at("status").get<std::string>());
  for (const auto& [d, c] : j.at("daily_counts").items()) {
    auto day = ParseDate(d);
    if (!day) throw InvalidInput("bad date key " + d);
    n.daily_counts[*day] = c.get<int64_t>();
  }
  n.member_docs = j.at("member_docs").get<std::vector<std::string>>();
  for (const auto& d : j.at("change_points")) n.change_points.push_back(RequireDate(d));
  n.summary = j.at("summary").get<std::vector<std::string>>();
  if (auto it = j.find("daily_terms"); it != j.end()) {
    for (const auto& [d, t] : it->items()) {
      auto day = ParseDate(d);
      if (!day) throw InvalidInput("bad date key " + d);
      n.daily_terms[*day] = t.get<TermCounts>();
    }
  }
  n.zero_streak = j.value("zero_streak", 0);
  n.last_activity = j.contains("last_activity") ? RequireDate(j.at("last_activity")) : n.opened_on;
  return n;
}

NarrativeTracker::NarrativeTracker(SurpriseParams surprise, ChangeParams change)
    : surprise_(surprise), change_(change) {
  surprise_.Validate();
  if (change_.window_days < 1) throw ConfigError("change window must be >= 1");
}

DayResult NarrativeTracker::RunDay(Date day,
                                   const std::vector<const Document*>& published_exemplars,
                                   const NarrativeContext& ctx) {
  if (last_day_ && day <= *last_day_) {
    throw InvalidInput("narrative batch for " + FormatDate(day) + " already ran or is out of order");
  }
  if (!ctx.gazetteer || !ctx.lexicon) throw InvalidInput("narrative context incomplete");

  std::vector<std::set<PairKey>> doc_pairs;
  doc_pairs.reserve(published_exemplars.size());
  PairCounts today;
  for (const Document* d : published_exemplars) {
    doc_pairs.push_back(DocumentPairs(*d, *ctx.gazetteer, *ctx.lexicon));
    for (const auto& key : doc_pairs.back()) ++today[key];
  }
  auto docs_for = [&](const PairKey& key) {
    std::vector<const Document*> docs;
    for (size_t i = 0; i < published_exemplars.size(); ++i) {
      if (doc_pairs[i].contains(key)) docs.push_back(published_exemplars[i]);
    }
    return docs;
  };

  std::set<PairKey> open;
  for (const auto& n : narratives_) {
    if (n.status != NarrativeStatus::kClosed) open.insert(n.key);
  }

  DayResult result;
  result.day = day;
  for (auto& n : narratives_) {
    if (n.status == NarrativeStatus::kClosed) continue;
    auto docs = today.contains(n.key) ? docs_for(n.key) : std::vector<const Document*>{};
    const size_t before = n.member_docs.size();
    UpdateNarrative(&n, day, docs, ctx, change_);
    if (n.member_docs.size() > before) result.updated.push_back(n.narrative_id);
  }

  for (const auto& key : DetectNarratives(today, history_, day, surprise_, open)) {
    Narrative n;
    n.narrative_id = narratives_.size() + 1;
    n.key = key;
    n.opened_on = day;
    n.last_activity = day;
    UpdateNarrative(&n, day, docs_for(key), ctx, change_);
    result.opened.push_back(n.narrative_id);
    narratives_.push_back(std::move(n));
  }

  history_.Record(day, today);
  last_day_ = day;
  return result;
}

const Narrative* NarrativeTracker::Find(uint64_t id) const {
  if (id == 0 || id > narratives_.size()) return nullptr;
  return &narratives_[id - 1];
}

std::vector<const Narrative*> NarrativeTracker::ListForDate(Date day) const {
  std::vector<const Narrative*> out;
  for (const auto& n : narratives_) {
    auto it = n.daily_counts.find(day);
    if (n.opened_on == day || (it != n.daily_counts.end() && it->second > 0)) {
      out.push_back(&n);
    }
  }
  return out;
}

json NarrativeTracker::ToJson() const {
  json narratives = json::array();
  for (const auto& n : narratives_) narratives.push_back(NarrativeToJson(n, nullptr, nullptr, true));
  json j{{"narratives", std::move(narratives)}, {"history", history_.ToJson()}};
  j["last_day"] = last_day_ ? json(FormatDate(*last_day_)) : json(nullptr);
  return j;
}

void NarrativeTracker::LoadJson(const json& j) {
  narratives_.clear();
  for (const auto& n : j.at("narratives")) narratives_.push_back(NarrativeFromJson(n));
  history_ = PairHistory::FromJson(j.at("history"));
  const auto& last = j.at("last_day");
  if (last.is_null()) {
    last_day_.reset();
  } else {
    last_day_ = RequireDate(last);
  }
}

}  // namespace epiwatch
