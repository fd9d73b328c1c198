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

#ifndef EPIWATCH_NARRATIVES_NARRATIVES_H_
#define EPIWATCH_NARRATIVES_NARRATIVES_H_

#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "epiwatch/geo/gazetteer.h"
#include "epiwatch/ingest/document.h"
#include "epiwatch/narratives/stats.h"
#include "epiwatch/text/lexicon.h"
#include "epiwatch/util/time.h"

namespace epiwatch {

struct PairKey {
  std::string keyword;  // non-generic canonical_id
  GeoId location = 0;

  auto operator<=>(const PairKey&) const = default;
  bool operator==(const PairKey&) const = default;
};

using PairCounts = std::map<PairKey, int64_t>;

struct SurpriseParams {
  int window_days = 28;
  double p_threshold = 0.01;
  int64_t c_min = 3;
  double lambda_floor = 0.1;

  // Throws ConfigError.
  void Validate() const;
};

struct ChangeParams {
  int window_days = 3;
  double threshold = 0.2;
};

inline constexpr int kDormantAfterZeroDays = 14;
inline constexpr int kClosedAfterZeroDays = 60;
inline constexpr size_t kSummarySentences = 3;

enum class NarrativeStatus { kActive, kDormant, kClosed };
std::string_view ToString(NarrativeStatus s);

struct Narrative {
  uint64_t narrative_id = 0;
  PairKey key;
  Date opened_on{};
  // Contiguous from opened_on, zero-filled.
  std::map<Date, int64_t> daily_counts;
  std::vector<std::string> member_docs;
  NarrativeStatus status = NarrativeStatus::kActive;
  std::vector<Date> change_points;
  std::vector<std::string> summary;

  // Content-word counts of member documents per day; drives change
  // detection.
  std::map<Date, TermCounts> daily_terms;
  int zero_streak = 0;
  // Last day on which new member documents arrived (or opened_on).
  Date last_activity{};
};

// Cross pairs of a document's non-generic keywords and resolved locations,
// each location also credited to all of its ancestors. A pair counts at
// most once per document. The caller passes cluster exemplars only.
PairCounts DailyPairCounts(const std::vector<const Document*>& docs,
                           const Gazetteer& gaz, const Lexicon& lexicon);

// Pairs of a single document, as counted by DailyPairCounts.
std::set<PairKey> DocumentPairs(const Document& doc, const Gazetteer& gaz,
                                const Lexicon& lexicon);

// Per-day pair counts of earlier days.
class PairHistory {
 public:
  void Record(Date day, const PairCounts& counts);
  bool Covers(Date day) const { return days_.contains(day); }
  size_t days() const { return days_.size(); }

  // Mean daily count over the recorded days in [day - window, day).
  // Zero when no such day was recorded.
  double TrailingMean(const PairKey& key, Date day, int window) const;

  nlohmann::json ToJson() const;
  static PairHistory FromJson(const nlohmann::json& j);

 private:
  std::map<Date, PairCounts> days_;
};

// Flags a pair iff count >= c_min, PoissonTail(count, rate) < p_threshold
// with rate = max(lambda_floor, trailing mean), and the pair has no open
// narrative.
std::vector<PairKey> DetectNarratives(const PairCounts& today,
                                      const PairHistory& history, Date day,
                                      const SurpriseParams& params,
                                      const std::set<PairKey>& open_pairs);

// Jensen-Shannon divergence between the w days before each interior date
// and the w days from it; dates whose divergence exceeds the threshold and
// is a strict local maximum. Empty when the narrative spans fewer than 2w
// days.
std::vector<Date> DetectChangePoints(const Narrative& n, const ChangeParams& params);

// Divergence series used by DetectChangePoints, keyed by boundary date.
std::map<Date, double> ChangeDivergence(const Narrative& n, const ChangeParams& params);

using DocLookup = std::function<const Document*(const std::string&)>;

struct NarrativeContext {
  const Gazetteer* gazetteer = nullptr;
  const Lexicon* lexicon = nullptr;
  const std::unordered_set<std::string>* stop_words = nullptr;
  DocLookup lookup;
};

// Appends `day` (zero-filling any gap), adds member documents, refreshes
// the summary and change points and applies the dormancy rules.
void UpdateNarrative(Narrative* n, Date day,
                     const std::vector<const Document*>& todays_docs,
                     const NarrativeContext& ctx, const ChangeParams& change);

// Export record. `with_state` adds the fields needed to resume tracking.
nlohmann::json NarrativeToJson(const Narrative& n, const Gazetteer* gaz = nullptr,
                               const Lexicon* lexicon = nullptr,
                               bool with_state = false);
Narrative NarrativeFromJson(const nlohmann::json& j);

struct DayResult {
  Date day{};
  std::vector<uint64_t> opened;
  std::vector<uint64_t> updated;
};

// Daily narrative batch. Days must be run in increasing order. Not
// thread-safe.
class NarrativeTracker {
 public:
  NarrativeTracker(SurpriseParams surprise = {}, ChangeParams change = {});

  // `published_exemplars`: published cluster exemplars dated `day`.
  DayResult RunDay(Date day, const std::vector<const Document*>& published_exemplars,
                   const NarrativeContext& ctx);

  std::optional<Date> last_day() const { return last_day_; }
  const std::vector<Narrative>& narratives() const { return narratives_; }
  const Narrative* Find(uint64_t id) const;
  // Opened on `day` or received documents on `day`.
  std::vector<const Narrative*> ListForDate(Date day) const;
  const PairHistory& history() const { return history_; }

  nlohmann::json ToJson() const;
  void LoadJson(const nlohmann::json& j);

 private:
  SurpriseParams surprise_;
  ChangeParams change_;
  PairHistory history_;
  std::vector<Narrative> narratives_;
  std::optional<Date> last_day_;
};

}  // namespace epiwatch

#endif  // EPIWATCH_NARRATIVES_NARRATIVES_H_
