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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 when any
// fails. Criterion numbers given as arguments restrict the run.

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <json.hpp>

#include "epiwatch/dedup/cluster_index.h"
#include "epiwatch/dedup/sketch.h"
#include "epiwatch/ingest/document_json.h"
#include "epiwatch/narratives/narratives.h"
#include "epiwatch/narratives/stats.h"
#include "epiwatch/service/engine.h"
#include "epiwatch/text/relevance.h"
#include "epiwatch/text/summarize.h"
#include "epiwatch/util/error.h"
#include "synthetic.h"

namespace {

using namespace epiwatch;
using nlohmann::json;
namespace fs = std::filesystem;
namespace t = epiwatch::testing;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double Since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

size_t Pairs(size_t n) { return n * (n - 1) / 2; }

// 1. Bottom-k estimates against exact set Jaccard.
Outcome SketchAccuracy() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20260301);
  std::uniform_int_distribution<size_t> union_size(200, 2000);
  constexpr int kPairs = 500;
  double sum_err = 0, max_err = 0;
  for (int i = 0; i < kPairs; ++i) {
    const double target = static_cast<double>(i) / (kPairs - 1);
    const size_t u = union_size(rng);
    const auto shared = static_cast<size_t>(std::llround(target * static_cast<double>(u)));
    std::set<uint64_t> pool;
    while (pool.size() < u) pool.insert(rng());
    std::vector<uint64_t> all(pool.begin(), pool.end());
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<uint64_t> a(all.begin(), all.begin() + shared), b = a;
    for (size_t j = shared; j < u; ++j) (j % 2 ? a : b).push_back(all[j]);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<uint64_t> inter, uni;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(uni));
    const double exact = static_cast<double>(inter.size()) / static_cast<double>(uni.size());
    const double est = EstimateJaccard(Sketch(a, 64), Sketch(b, 64));
    const double err = std::abs(est - exact);
    sum_err += err;
    max_err = std::max(max_err, err);
  }
  const double mae = sum_err / kPairs, secs = Since(start);
  return {mae <= 0.08 && max_err <= 0.25 && secs <= 10.0,
          Fmt("pairs=%d mae=%.4f max=%.4f seconds=%.2f", kPairs, mae, max_err, secs)};
}

// 2. Clustering of reworded republications against ground truth.
Outcome DedupClustering() {
  const auto corpus = t::MakeDedupCorpus(200, 12, 25, 0.05, 2026);
  DedupIndex index;
  std::map<std::string, const t::DedupCorpus::Item*> by_id;
  for (const auto& item : corpus.items) {
    by_id[item.doc.doc_id] = &item;
    index.Assign(MakeDedupRecord(item.doc));
  }
  std::map<size_t, size_t> truth_sizes;
  std::map<uint64_t, size_t> cluster_sizes;
  std::map<std::pair<size_t, uint64_t>, size_t> cells;
  for (const auto& item : corpus.items) {
    const uint64_t c = *index.ClusterOf(item.doc.doc_id);
    ++truth_sizes[item.truth];
    ++cluster_sizes[c];
    ++cells[{item.truth, c}];
  }
  size_t tp = 0, predicted = 0, actual = 0;
  for (const auto& [k, n] : cells) tp += Pairs(n);
  for (const auto& [k, n] : cluster_sizes) predicted += Pairs(n);
  for (const auto& [k, n] : truth_sizes) actual += Pairs(n);
  const double precision = predicted ? static_cast<double>(tp) / predicted : 1.0;
  const double recall = actual ? static_cast<double>(tp) / actual : 1.0;

  size_t bad_exemplars = 0;
  const auto clusters = index.Clusters();
  for (const auto& c : clusters) {
    Timestamp earliest = Timestamp::max();
    for (const auto& id : c.member_ids) {
      earliest = std::min(earliest, by_id.at(id)->doc.raw.published_at);
    }
    if (by_id.at(c.exemplar_id)->doc.raw.published_at != earliest) ++bad_exemplars;
  }
  bool planted = false;
  if (auto c = index.Cluster(*index.ClusterOf(corpus.planted_copy_id))) {
    planted = c->exemplar_id == corpus.planted_base_id &&
              std::any_of(c->count_history.begin(), c->count_history.end(), [&](const auto& h) {
                return h.first == corpus.planted_copy_id &&
                       h.second.category == CountCategory::kDeaths && h.second.value == 15;
              });
  }
  return {precision >= 0.95 && recall >= 0.90 && bad_exemplars == 0 && planted,
          Fmt("docs=%zu clusters=%zu truth_pairs=%zu precision=%.4f recall=%.4f "
              "bad_exemplars=%zu planted_15_deaths=%s",
              corpus.items.size(), clusters.size(), actual, precision, recall, bad_exemplars,
              planted ? "yes" : "no")};
}

// 3. Relevance training and three-tier routing on a held-out split.
Outcome RelevancePipeline() {
  const auto corpus = t::MakeLabeledCorpus(1400, 0.2, 77);
  std::vector<size_t> order(corpus.docs.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), std::mt19937_64(5));
  const size_t train_n = order.size() * 8 / 10;
  std::vector<LabeledDocument> train;
  for (size_t i = 0; i < train_n; ++i) {
    train.push_back({&corpus.docs[order[i]], corpus.labels[order[i]]});
  }
  TrainOptions opts;
  const RelevanceModel model = TrainRelevance(train, opts);
  size_t correct = 0, misrouted = 0, held = 0;
  std::map<Status, size_t> tiers;
  for (size_t i = train_n; i < order.size(); ++i) {
    const Document& d = corpus.docs[order[i]];
    const double s = ScoreRelevance(d, model);
    if ((s >= 0.5) == corpus.labels[order[i]]) ++correct;
    const Status expected = s >= model.t_high  ? Status::kPublished
                            : s < model.t_low ? Status::kSuppressed
                                              : Status::kTriage;
    const Status routed = Route(s, model.t_low, model.t_high);
    if (routed != expected) ++misrouted;
    ++tiers[routed];
    ++held;
  }
  const size_t in_tiers =
      tiers[Status::kPublished] + tiers[Status::kTriage] + tiers[Status::kSuppressed];
  const double accuracy = static_cast<double>(correct) / held;
  return {accuracy >= 0.90 && misrouted == 0 && in_tiers == held,
          Fmt("train=%zu held_out=%zu accuracy=%.4f published=%zu triage=%zu suppressed=%zu "
              "misrouted=%zu",
              train_n, held, accuracy, tiers[Status::kPublished], tiers[Status::kTriage],
              tiers[Status::kSuppressed], misrouted)};
}

// 4. Toponym suite, parent-place search and great-circle distance.
Outcome GeoResolution() {
  const auto res = t::SharedResources();
  const Gazetteer& gaz = res->gazetteer;
  std::istringstream in(t::ReadFile(t::FixturePath("geo_cases.tsv")));
  int cases = 0, resolved = 0;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, '\t');) f.push_back(cell);
    ++cases;
    if (f.size() != 4) continue;
    const GeoMention m = gaz.Resolve(f[0], f[1]);
    if (ToString(m.method) != f[3]) continue;
    if (m.method != ResolveMethod::kUnresolved && m.resolved != std::stoll(f[2])) continue;
    ++resolved;
  }

  EngineConfig cfg;
  cfg.t_low = 0.1;
  cfg.t_high = 0.5;
  Engine engine(cfg, Resources::Load(cfg), nullptr);
  const Timestamp now = Now();
  std::istringstream docs(t::ReadFile(t::FixturePath("service_docs.jsonl")));
  for (std::string line; std::getline(docs, line);) {
    if (line.empty()) continue;
    auto a = RawArticleFromJson(json::parse(line), now);
    engine.Ingest(a, a.published_at);
  }
  // Every document tagged anywhere below a place must come back for it.
  size_t parent_checks = 0, missing = 0;
  std::map<std::string, std::set<GeoId>> tagged;
  for (const auto& id : engine.MatchIds(Query{})) {
    for (const auto& m : engine.GetDocument(id)->geo_mentions) {
      if (m.method != ResolveMethod::kUnresolved) tagged[id].insert(m.resolved);
    }
  }
  for (const auto& e : gaz.entities()) {
    Query q;
    q.geo_id = e.geo_id;
    const auto hits = engine.MatchIds(q);
    const std::set<std::string> got(hits.begin(), hits.end());
    const auto below = gaz.Expand(e.geo_id);
    for (const auto& [id, places] : tagged) {
      const bool child_tagged = std::any_of(places.begin(), places.end(),
                                            [&](GeoId g) { return below.contains(g); });
      if (!child_tagged) continue;
      ++parent_checks;
      if (!got.contains(id)) ++missing;
    }
  }
  Query tokyo;
  tokyo.geo_id = 201;
  const size_t tokyo_docs = engine.Count(tokyo);

  const double km = DistanceKm(gaz.Get(315), gaz.Get(305));
  return {resolved == 20 && cases == 20 && missing == 0 && parent_checks > 0 && tokyo_docs == 3 &&
              std::abs(km - 343.5) <= 1.0,
          Fmt("cases=%d/%d parent_checks=%zu missing=%zu tokyo_docs=%zu paris_london_km=%.2f",
              resolved, cases, parent_checks, missing, tokyo_docs, km)};
}

PairKey SyntheticKey(int i) { return {"K" + std::to_string(i), i}; }

// Simulated days of independent Poisson pair counts.
struct PoissonStream {
  PairHistory history;
  Date next_day;
};

std::vector<PairKey> FlagsAt(const PairCounts& today, const PairHistory& h, Date day,
                             double p) {
  SurpriseParams params;
  params.p_threshold = p;
  auto flags = DetectNarratives(today, h, day, params, {});
  std::sort(flags.begin(), flags.end());
  return flags;
}

// Article-level pair counts of one synthetic day with Zipf-distributed
// keyword and place popularity.
class NewsDay {
 public:
  explicit NewsDay(const Resources& res) : res_(res) {
    for (const auto& e : res.lexicon.entries()) {
      if (!e.generic) keywords_.push_back(e.canonical_id);
    }
    for (const auto& e : res.gazetteer.entities()) {
      if (!res.gazetteer.Children(e.geo_id).empty()) continue;
      places_.push_back(e.geo_id);
    }
    kw_dist_ = Zipf(keywords_.size(), 1.1);
    place_dist_ = Zipf(places_.size(), 1.0);
  }

  // `bursts` adds that many extra stories, each 10-40 articles on one
  // otherwise rare pair, within the same article total.
  PairCounts Generate(size_t articles, size_t bursts, std::mt19937_64& rng) {
    std::vector<std::pair<std::string, GeoId>> extra;
    std::uniform_int_distribution<size_t> size(10, 40);
    for (size_t b = 0; b < bursts; ++b) {
      const auto& kw = keywords_[keywords_.size() - 1 - b % (keywords_.size() / 2)];
      const GeoId place = places_[places_.size() - 1 - (b * 7) % (places_.size() / 2)];
      for (size_t n = size(rng); n-- > 0;) extra.emplace_back(kw, place);
    }
    std::deque<Document> docs;
    std::vector<const Document*> ptrs;
    for (size_t i = 0; i < articles; ++i) {
      Document& d = docs.emplace_back();
      d.doc_id = std::to_string(i);
      if (i < extra.size()) {
        AddKeyword(&d, extra[i].first);
        AddPlace(&d, extra[i].second);
      } else {
        AddKeyword(&d, keywords_[kw_dist_(rng)]);
        if (rng() % 4 == 0) AddKeyword(&d, keywords_[kw_dist_(rng)]);
        AddPlace(&d, places_[place_dist_(rng)]);
        if (rng() % 3 == 0) AddPlace(&d, places_[place_dist_(rng)]);
      }
      ptrs.push_back(&d);
    }
    return DailyPairCounts(ptrs, res_.gazetteer, res_.lexicon);
  }

 private:
  static std::discrete_distribution<size_t> Zipf(size_t n, double s) {
    std::vector<double> w(n);
    for (size_t r = 0; r < n; ++r) w[r] = 1.0 / std::pow(static_cast<double>(r + 1), s);
    return {w.begin(), w.end()};
  }
  static void AddKeyword(Document* d, const std::string& id) {
    KeywordMention m;
    m.canonical_id = id;
    d->keyword_mentions.push_back(m);
  }
  static void AddPlace(Document* d, GeoId g) {
    GeoMention m;
    m.resolved = g;
    m.method = ResolveMethod::kUnique;
    d->geo_mentions.push_back(m);
  }

  const Resources& res_;
  std::vector<std::string> keywords_;
  std::vector<GeoId> places_;
  std::discrete_distribution<size_t> kw_dist_, place_dist_;
};

// 5. Surprise detection: injection, false-flag rate, monotonicity and
// calibration on a 10,000-article day.
Outcome NarrativeDetection() {
  std::mt19937_64 rng(55);
  const Date d0 = *ParseDate("2026-06-01");

  // Injection: 100 independent pairs, 28 days at 0.5, then a count of 5.
  PairHistory low;
  std::poisson_distribution<int64_t> half(0.5);
  constexpr int kInjected = 100;
  for (int day = 0; day < 28; ++day) {
    PairCounts c;
    for (int i = 0; i < kInjected; ++i) {
      if (int64_t n = half(rng)) c[SyntheticKey(i)] = n;
    }
    low.Record(d0 + std::chrono::days(day), c);
  }
  PairCounts injected;
  for (int i = 0; i < kInjected; ++i) injected[SyntheticKey(i)] = 5;
  const Date inj_day = d0 + std::chrono::days(28);
  const size_t caught = FlagsAt(injected, low, inj_day, 0.01).size();

  // Stationary: 500 pairs at 5, 28 warm-up days, then 20 scored days.
  PairHistory steady;
  std::poisson_distribution<int64_t> five(5.0);
  constexpr int kSteady = 500;
  auto steady_day = [&] {
    PairCounts c;
    for (int i = 0; i < kSteady; ++i) {
      if (int64_t n = five(rng)) c[SyntheticKey(i)] = n;
    }
    return c;
  };
  for (int day = 0; day < 28; ++day) steady.Record(d0 + std::chrono::days(day), steady_day());
  const std::vector<double> ps = {1e-6, 1e-4, 1e-3, 1e-2, 5e-2, 0.1};
  size_t pair_days = 0, false_flags = 0, monotone_violations = 0;
  auto check_monotone = [&](const PairCounts& c, const PairHistory& h, Date day) {
    std::vector<PairKey> prev;
    for (double p : ps) {
      auto cur = FlagsAt(c, h, day, p);
      if (!std::includes(cur.begin(), cur.end(), prev.begin(), prev.end())) {
        ++monotone_violations;
      }
      prev = std::move(cur);
    }
  };
  check_monotone(injected, low, inj_day);
  for (int day = 28; day < 48; ++day) {
    const Date dd = d0 + std::chrono::days(day);
    const PairCounts c = steady_day();
    pair_days += kSteady;
    false_flags += FlagsAt(c, steady, dd, 0.01).size();
    check_monotone(c, steady, dd);
    steady.Record(dd, c);
  }
  const double false_rate = static_cast<double>(false_flags) / pair_days;

  // Calibration: 28 ordinary days of 10,000 articles, then a day with 30
  // emerging stories.
  NewsDay news(*t::SharedResources());
  PairHistory hist;
  for (int day = 0; day < 28; ++day) {
    hist.Record(d0 + std::chrono::days(day), news.Generate(10000, 0, rng));
  }
  const PairCounts busy = news.Generate(10000, 30, rng);
  // Sweep the two thresholds; each emerging story also credits the
  // region and country above its city.
  std::string sweep, band;
  size_t in_band = 0;
  for (double p : {1e-2, 1e-3, 1e-4, 1e-6, 1e-8}) {
    sweep += Fmt(" p=%g:", p);
    for (int64_t c_min : {3, 5, 10, 15, 20, 25, 30, 40}) {
      SurpriseParams params;
      params.p_threshold = p;
      params.c_min = c_min;
      const size_t n = DetectNarratives(busy, hist, inj_day, params, {}).size();
      sweep += Fmt("%s%zu", c_min == 3 ? "" : "/", n);
      if (n >= 20 && n <= 50) {
        if (in_band++ == 0) band = Fmt("(p=%g,c_min=%lld)->%zu", p, static_cast<long long>(c_min), n);
      }
    }
  }
  return {caught == kInjected && pair_days >= 10000 && false_rate <= 0.02 &&
              monotone_violations == 0 && in_band > 0,
          Fmt("injected_flagged=%zu/%d false_flag_rate=%.4f over %zu pair-days "
              "monotone_violations=%zu pairs_on_busy_day=%zu",
              caught, kInjected, false_rate, pair_days, monotone_violations, busy.size()) +
              Fmt(" settings_in_20_50=%zu first=%s", in_band, band.c_str()) +
              " new_by_c_min{3,5,10,15,20,25,30,40}:" + sweep};
}

// Independent base-2 Jensen-Shannon with add-one smoothing.
double OracleJsd(const TermCounts& a, const TermCounts& b) {
  std::set<std::string> vocab;
  double na = 0, nb = 0;
  for (const auto& [w, c] : a) vocab.insert(w), na += static_cast<double>(c);
  for (const auto& [w, c] : b) vocab.insert(w), nb += static_cast<double>(c);
  if (vocab.empty()) return 0.0;
  const double v = static_cast<double>(vocab.size());
  double sum = 0;
  for (const auto& w : vocab) {
    const double p = (static_cast<double>(a.contains(w) ? a.at(w) : 0) + 1) / (na + v);
    const double q = (static_cast<double>(b.contains(w) ? b.at(w) : 0) + 1) / (nb + v);
    const double m = (p + q) / 2;
    sum += 0.5 * p * std::log2(p / m) + 0.5 * q * std::log2(q / m);
  }
  return sum;
}

struct TrackedRun {
  std::vector<int> points;  // day offsets
  double max_oracle_gap = 0;
  bool terms_match = true;
};

// Drives a narrative for 20 days of 4 documents of 40 words each; from day
// `shift_day` on, 60% of the vocabulary is replaced.
TrackedRun TrackVocabulary(int shift_day, uint64_t seed) {
  const auto res = t::SharedResources();
  const auto words = t::PseudoWords(160, seed);
  std::vector<std::string> v1(words.begin(), words.begin() + 100);
  std::vector<std::string> v2(words.begin(), words.begin() + 40);
  v2.insert(v2.end(), words.begin() + 100, words.end());
  std::mt19937_64 rng(seed);
  const Date d0 = *ParseDate("2026-05-01");
  std::deque<Document> docs;
  std::map<std::string, const Document*> lookup;
  NarrativeContext ctx{&res->gazetteer, &res->lexicon, &res->stop_words,
                       [&](const std::string& id) {
                         auto it = lookup.find(id);
                         return it == lookup.end() ? nullptr : it->second;
                       }};
  Narrative n;
  n.key = {"C0025007", 302};
  n.opened_on = d0;
  std::map<Date, TermCounts> expected_terms;
  for (int day = 0; day < 20; ++day) {
    const Date dd = d0 + std::chrono::days(day);
    const auto& vocab = day >= shift_day ? v2 : v1;
    std::vector<const Document*> today;
    for (int k = 0; k < 4; ++k) {
      std::string body;
      for (int w = 0; w < 40; ++w) {
        const auto& word = vocab[rng() % vocab.size()];
        body += (w ? " " : "") + word;
        ++expected_terms[dd][word];
      }
      Document& d = docs.emplace_back(t::MakeDoc("", body + ".", "doc" + std::to_string(docs.size())));
      lookup[d.doc_id] = &d;
      today.push_back(&d);
    }
    UpdateNarrative(&n, dd, today, ctx, ChangeParams{});
  }
  TrackedRun run;
  run.terms_match = n.daily_terms == expected_terms;
  const auto series = ChangeDivergence(n, ChangeParams{});
  for (const auto& [boundary, jsd] : series) {
    TermCounts before, after;
    for (int k = 1; k <= 3; ++k) {
      for (const auto& [w, c] : expected_terms[boundary - std::chrono::days(k)]) before[w] += c;
      for (const auto& [w, c] : expected_terms[boundary + std::chrono::days(k - 1)]) after[w] += c;
    }
    run.max_oracle_gap = std::max(run.max_oracle_gap, std::abs(OracleJsd(before, after) - jsd));
  }
  for (Date p : n.change_points) run.points.push_back(static_cast<int>((p - d0).count()));
  return run;
}

// 6. Vocabulary-shift change points.
Outcome ChangePoints() {
  const TrackedRun shifted = TrackVocabulary(10, 606);
  const TrackedRun steady = TrackVocabulary(1000, 607);
  const bool shifted_ok = !shifted.points.empty() &&
                          std::all_of(shifted.points.begin(), shifted.points.end(),
                                      [](int d) { return d >= 8 && d <= 12; });
  std::string pts;
  for (int d : shifted.points) pts += (pts.empty() ? "" : ",") + std::to_string(d);
  const double gap = std::max(shifted.max_oracle_gap, steady.max_oracle_gap);
  return {shifted_ok && steady.points.empty() && gap <= 1e-12 && shifted.terms_match &&
              steady.terms_match,
          Fmt("shifted_change_days=[%s] stationary_change_points=%zu oracle_gap=%.2e",
              pts.c_str(), steady.points.size(), gap)};
}

// 7. Poisson tail against 50-digit arithmetic.
Outcome PoissonTailAccuracy() {
  using Big = boost::multiprecision::cpp_dec_float_50;
  double worst = 0;
  int points = 0;
  for (double rate : {0.1, 1.0, 5.0, 20.0}) {
    const Big lambda(rate);
    // Upper tail summed directly, far enough out that the rest is below
    // 1e-40.
    std::vector<Big> pmf(400);
    pmf[0] = boost::multiprecision::exp(-lambda);
    for (size_t k = 1; k < pmf.size(); ++k) pmf[k] = pmf[k - 1] * lambda / Big(k);
    Big tail = 0;
    std::vector<Big> tails(pmf.size() + 1);
    for (size_t k = pmf.size(); k-- > 0;) {
      tail += pmf[k];
      tails[k] = tail;
    }
    for (uint64_t c = 0; c <= 100; ++c) {
      const double err = std::abs(PoissonTail(c, rate) - tails[c].convert_to<double>());
      worst = std::max(worst, err);
      ++points;
    }
  }
  return {worst <= 1e-12, Fmt("grid_points=%d max_abs_error=%.3e", points, worst)};
}

std::string Shell(const std::string& cmd, int* status) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) throw std::runtime_error("popen failed");
  char buf[4096];
  while (size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  *status = pclose(p);
  return out;
}

void WriteFile(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  f << content;
}

// Model trained from generated labels through the CLI, shared by the two
// process-level criteria.
const std::string& TrainedModel() {
  static const std::string path = [] {
    const std::string dir = t::MakeTempDir("model");
    WriteFile(dir + "/labels.tsv", t::MakeNewsLabels(3000, 31));
    int status = 0;
    Shell(std::string(EPIWATCH_CLI_PATH) + " train --labels " + dir + "/labels.tsv --out " +
              dir + "/model.txt --t-low 0.3 --t-high 0.7 2>&1",
          &status);
    if (status != 0) throw std::runtime_error("model training failed");
    return dir + "/model.txt";
  }();
  return path;
}

// 8. Replay throughput through the CLI.
Outcome Throughput() {
  const std::string dir = t::MakeTempDir("replay");
  t::NewsOptions opts;
  opts.articles = 10000;
  opts.days = 1;
  opts.seed = 808;
  WriteFile(dir + "/corpus.jsonl", t::ToJsonLines(t::MakeNewsCorpus(opts)));
  const std::string& model = TrainedModel();
  const auto start = Clock::now();
  int status = 0;
  const std::string out =
      Shell(std::string(EPIWATCH_CLI_PATH) + " --store " + dir + "/store --model " + model +
                " replay --corpus " + dir + "/corpus.jsonl --date " + opts.first_day + " 2>/dev/null",
            &status);
  const double wall = Since(start);
  if (status != 0) return {false, "replay exited with status " + std::to_string(status)};
  const auto last = out.substr(out.rfind('{'));
  const json r = json::parse(last);
  const double ingest = r.at("ingest_seconds").get<double>();
  const double batch = r.at("batch_seconds").get<double>();
  const size_t docs = r.at("documents").get<size_t>();
  return {docs == 10000 && wall <= 120.0 && batch <= 60.0,
          Fmt("documents=%zu wall_seconds=%.1f ingest_seconds=%.1f batch_seconds=%.2f "
              "narratives_opened=%zu",
              docs, wall, ingest, batch, r.at("narratives_opened").get<size_t>())};
}

size_t SegmentLines(const std::string& dir) {
  size_t lines = 0;
  std::error_code ec;
  for (const auto& e : fs::directory_iterator(dir, ec)) {
    const auto name = e.path().filename().string();
    if (!name.starts_with("docs-")) continue;
    std::ifstream f(e.path(), std::ios::binary);
    lines += static_cast<size_t>(std::count(std::istreambuf_iterator<char>(f),
                                            std::istreambuf_iterator<char>(), '\n'));
  }
  return lines;
}

// 9. Kill mid-ingest, recover, compare with a clean run of the same prefix.
Outcome Durability() {
  const std::string dir = t::MakeTempDir("kill");
  const std::string store = dir + "/store";
  t::NewsOptions opts;
  opts.articles = 4000;
  opts.days = 3;
  opts.seed = 909;
  const auto corpus = t::MakeNewsCorpus(opts);
  WriteFile(dir + "/corpus.jsonl", t::ToJsonLines(corpus));
  const std::string& model = TrainedModel();

  const pid_t pid = fork();
  if (pid < 0) return {false, "fork failed"};
  if (pid == 0) {
    const int null = open("/dev/null", O_WRONLY);
    dup2(null, 1);
    dup2(null, 2);
    const std::string corpus_path = dir + "/corpus.jsonl";
    execl(EPIWATCH_CLI_PATH, "epiwatch", "--store", store.c_str(), "--model", model.c_str(),
          "replay", "--corpus", corpus_path.c_str(), "--date", "2026-09-03",
          static_cast<char*>(nullptr));
    _exit(127);
  }
  bool killed = false;
  size_t seen_lines = 0;
  for (;;) {
    int st = 0;
    if (waitpid(pid, &st, WNOHANG) == pid) break;
    seen_lines = SegmentLines(store);
    if (seen_lines >= 1000) {
      kill(pid, SIGKILL);
      waitpid(pid, &st, 0);
      killed = true;
      break;
    }
    usleep(2000);
  }
  if (!killed) return {false, Fmt("replay finished before the kill (%zu lines)", seen_lines)};

  EngineConfig cfg;
  cfg.model = model;
  const auto res = Resources::Load(cfg);
  auto opened = Store::Open(store);
  const size_t repaired = opened->repaired_lines();
  Engine recovered(cfg, res, std::move(opened));
  const size_t n = recovered.size();

  Engine clean(cfg, res, nullptr);
  const Timestamp now = Now();
  std::istringstream in(t::ReadFile(dir + "/corpus.jsonl"));
  for (std::string line; clean.size() < n && std::getline(in, line);) {
    const RawArticle a = RawArticleFromJson(json::parse(line), now);
    try {
      clean.Ingest(a, a.published_at_fallback ? now : a.published_at);
    } catch (const InvalidInput&) {
    }
  }

  std::vector<Query> queries(1);
  Query all;
  all.status_filter = {Status::kPublished, Status::kTriage, Status::kSuppressed};
  queries.push_back(all);
  for (const char* kw : {"C0025007", "C0021400", "C0008149"}) {
    Query q;
    q.keyword_ids = {kw};
    queries.push_back(q);
  }
  for (GeoId g : {101, 104, 110, 201}) {
    Query q;
    q.geo_id = g;
    queries.push_back(q);
  }
  Query text;
  text.text_terms = {"outbreak"};
  queries.push_back(text);
  Query dated;
  dated.date_from = dated.date_to = *ParseDate("2026-09-01");
  queries.push_back(dated);
  size_t mismatched = 0;
  for (const auto& q : queries) {
    if (recovered.SearchJson(q).at("total") != clean.SearchJson(q).at("total")) ++mismatched;
  }
  const bool facets_match = recovered.SearchJson(all).at("facets") == clean.SearchJson(all).at("facets");
  const bool partition_match = recovered.ClusterPartition() == clean.ClusterPartition();
  const bool ids_match = recovered.MatchIds(all) == clean.MatchIds(all);
  return {n >= 1000 && mismatched == 0 && facets_match && partition_match && ids_match,
          Fmt("killed_after_lines=%zu recovered_docs=%zu repaired_lines=%zu queries=%zu "
              "mismatched_totals=%zu facets_match=%s partitions_match=%s clusters=%zu",
              seen_lines, n, repaired, queries.size(), mismatched, facets_match ? "yes" : "no",
              partition_match ? "yes" : "no", recovered.ClusterPartition().size())};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"sketch accuracy", SketchAccuracy},
      {"dedup clustering", DedupClustering},
      {"relevance pipeline", RelevancePipeline},
      {"geo resolution", GeoResolution},
      {"narrative detection", NarrativeDetection},
      {"change points", ChangePoints},
      {"poisson tail", PoissonTailAccuracy},
      {"throughput", Throughput},
      {"durability", Durability},
  };
  std::set<size_t> only;
  for (int a = 1; a < argc; ++a) only.insert(std::stoul(argv[a]));
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    if (!only.empty() && !only.contains(i + 1)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << "criterion " << i + 1 << " " << (o.pass ? "PASS" : "FAIL") << " "
              << criteria[i].first << ": " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
