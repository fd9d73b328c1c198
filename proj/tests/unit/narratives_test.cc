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

#include <doctest.h>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cmath>
#include <random>

#include "epiwatch/narratives/narratives.h"
#include "epiwatch/narratives/stats.h"
#include "epiwatch/util/error.h"
#include "synthetic.h"

using namespace epiwatch;
using epiwatch::testing::MakeDoc;
using epiwatch::testing::SharedResources;

namespace {

using Big = boost::multiprecision::cpp_dec_float_50;

// P(X >= c) summed term by term in 50-digit arithmetic.
double OracleTail(uint64_t c, double rate) {
  const Big lambda(rate);
  Big term = boost::multiprecision::exp(-lambda);
  Big below = 0;
  for (uint64_t k = 0; k < c; ++k) {
    below += term;
    term *= lambda / Big(k + 1);
  }
  return static_cast<double>(Big(1) - below);
}

Date Day(const char* s) { return *ParseDate(s); }

Document Tagged(const std::string& body, std::vector<std::string> keywords,
                std::vector<GeoId> places) {
  Document d = MakeDoc("", body);
  for (auto& k : keywords) d.keyword_mentions.push_back({k, k, {0, 0}, Field::kBody});
  for (GeoId g : places) d.geo_mentions.push_back({"x", {0, 0}, Field::kBody, g, ResolveMethod::kUnique});
  return d;
}

NarrativeContext Context(std::vector<Document>* pool) {
  const auto& res = *SharedResources();
  NarrativeContext ctx;
  ctx.gazetteer = &res.gazetteer;
  ctx.lexicon = &res.lexicon;
  ctx.stop_words = &res.stop_words;
  ctx.lookup = [pool](const std::string& id) -> const Document* {
    for (const auto& d : *pool) {
      if (d.doc_id == id) return &d;
    }
    return nullptr;
  };
  return ctx;
}

constexpr const char* kMeasles = "C0025007";
constexpr const char* kCholera = "C0008149";
constexpr const char* kOutbreak = "C0012652";  // generic

}  // namespace

TEST_CASE("daily_pair_counts") {
  const auto& res = *SharedResources();
  // Shinjuku (302) < Tokyo (201) < Japan (101).
  Document d = Tagged("Measles in Shinjuku.", {kMeasles}, {302});
  PairCounts c = DailyPairCounts({&d}, res.gazetteer, res.lexicon);
  CHECK(c.size() == 3);
  CHECK(c.at({kMeasles, 302}) == 1);
  CHECK(c.at({kMeasles, 201}) == 1);
  CHECK(c.at({kMeasles, 101}) == 1);

  Document generic = Tagged("Outbreak in Shinjuku.", {kOutbreak}, {302});
  CHECK(DailyPairCounts({&generic}, res.gazetteer, res.lexicon).empty());

  Document twice = Tagged("Measles, measles in Tokyo and Tokyo.", {kMeasles, kMeasles}, {201, 201});
  CHECK(DailyPairCounts({&twice}, res.gazetteer, res.lexicon).at({kMeasles, 201}) == 1);

  Document unresolved = d;
  unresolved.geo_mentions[0].method = ResolveMethod::kUnresolved;
  CHECK(DailyPairCounts({&unresolved}, res.gazetteer, res.lexicon).empty());

  SUBCASE("ancestor credit never falls below the child's") {
    std::mt19937_64 rng(3);
    const auto& ents = res.gazetteer.entities();
    std::vector<Document> docs;
    for (int i = 0; i < 300; ++i) {
      docs.push_back(Tagged("x", {i % 2 ? kMeasles : kCholera},
                            {ents[rng() % ents.size()].geo_id, ents[rng() % ents.size()].geo_id}));
    }
    std::vector<const Document*> ptrs;
    for (const auto& x : docs) ptrs.push_back(&x);
    const PairCounts all = DailyPairCounts(ptrs, res.gazetteer, res.lexicon);
    for (const auto& [key, n] : all) {
      for (GeoId a : res.gazetteer.Ancestors(key.location)) {
        CHECK(all.at({key.keyword, a}) >= n);
      }
    }
  }
}

TEST_CASE("poisson_tail") {
  CHECK(PoissonTail(0, 3.0) == 1.0);
  CHECK(PoissonTail(1, 1.0) == doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-14));
  CHECK(std::abs(PoissonTail(1, 1.0) - 0.632121) < 1e-6);
  const double p = PoissonTail(10, 0.5);
  // Series value 1.7096700293489e-10.
  CHECK(std::abs(p - 1.7096700293489e-10) <= 1e-12);
  CHECK(std::abs(p - OracleTail(10, 0.5)) <= 1e-12);
  CHECK(p == doctest::Approx(OracleTail(10, 0.5)).epsilon(1e-12));
  CHECK_THROWS_AS(PoissonTail(3, 0.0), InvalidInput);
  CHECK_THROWS_AS(PoissonTail(3, -1.0), InvalidInput);

  SUBCASE("large counts") {
    for (auto [c, rate] : std::vector<std::pair<uint64_t, double>>{
             {10000, 10000.0}, {10000, 9800.0}, {9900, 10000.0}, {1000, 900.0}, {500, 520.5}}) {
      CAPTURE(c);
      CAPTURE(rate);
      CHECK(std::abs(PoissonTail(c, rate) - OracleTail(c, rate)) <= 1e-12);
    }
  }

  SUBCASE("strictly monotone") {
    for (double rate : {0.3, 2.0, 7.5}) {
      for (uint64_t c = 0; c < 25; ++c) CHECK(PoissonTail(c + 1, rate) < PoissonTail(c, rate));
    }
    for (uint64_t c = 1; c < 20; ++c) {
      for (double rate = 0.5; rate < 10; rate += 0.5) {
        CHECK(PoissonTail(c, rate + 0.5) > PoissonTail(c, rate));
      }
    }
  }
}

TEST_CASE("jensen_shannon") {
  TermCounts a{{"fever", 3}, {"cough", 1}}, b{{"vaccine", 2}, {"clinic", 5}};
  CHECK(JensenShannon(a, a) == doctest::Approx(0.0));
  CHECK(JensenShannon({}, {}) == 0.0);
  CHECK(JensenShannon(a, b) == doctest::Approx(JensenShannon(b, a)));
  std::mt19937_64 rng(6);
  for (int t = 0; t < 200; ++t) {
    TermCounts p, q;
    for (int i = 0; i < 20; ++i) {
      p["w" + std::to_string(rng() % 15)] += static_cast<int64_t>(rng() % 4);
      q["w" + std::to_string(rng() % 15)] += static_cast<int64_t>(rng() % 4);
    }
    const double js = JensenShannon(p, q);
    CHECK(js >= 0.0);
    CHECK(js <= 1.0);
    CHECK(js == doctest::Approx(JensenShannon(q, p)).epsilon(1e-12));
  }
  // Proportional counts with equal totals after smoothing are equal.
  TermCounts big_disjoint_a, big_disjoint_b;
  for (int i = 0; i < 50; ++i) {
    big_disjoint_a["a" + std::to_string(i)] = 1000;
    big_disjoint_b["b" + std::to_string(i)] = 1000;
  }
  const double near_one = JensenShannon(big_disjoint_a, big_disjoint_b);
  CHECK(near_one > 0.95);
  CHECK(near_one < 1.0);
}

TEST_CASE("detect_narratives") {
  SurpriseParams params;
  const Date today = Day("2026-04-01");
  const PairKey key{kMeasles, 201};

  PairHistory empty_pair;
  empty_pair.Record(today - std::chrono::days(1), {{{kCholera, 101}, 4}});
  CHECK(DetectNarratives({{key, 10}}, empty_pair, today, params, {}) == std::vector<PairKey>{key});
  CHECK(PoissonTail(10, 0.1) < 1e-16);
  CHECK(DetectNarratives({{key, 2}}, empty_pair, today, params, {}).empty());
  CHECK(DetectNarratives({{key, 10}}, empty_pair, today, params, {key}).empty());

  PairHistory steady;
  for (int i = 1; i <= 28; ++i) steady.Record(today - std::chrono::days(i), {{key, 5}});
  CHECK(steady.TrailingMean(key, today, 28) == 5.0);
  CHECK(std::abs(PoissonTail(5, 5.0) - 0.5595) < 1e-3);
  CHECK(DetectNarratives({{key, 5}}, steady, today, params, {}).empty());
  CHECK(DetectNarratives({{key, 14}}, steady, today, params, {}).size() == 1);

  SUBCASE("flags are monotone in p_threshold") {
    std::mt19937_64 rng(12);
    PairHistory h;
    PairCounts now;
    for (int pair = 0; pair < 300; ++pair) {
      const PairKey k{kMeasles, pair};
      const double rate = 0.2 + static_cast<double>(rng() % 60) / 10.0;
      for (int dd = 1; dd <= 28; ++dd) {
        std::poisson_distribution<int> pd(rate);
        PairCounts c{{k, pd(rng)}};
        // Merge into the day's record.
        h.Record(today - std::chrono::days(dd), c);
      }
      now[k] = std::poisson_distribution<int>(rate * 2)(rng);
    }
    std::vector<PairKey> prev;
    for (double pt : {1e-6, 1e-4, 1e-3, 1e-2, 0.05, 0.2}) {
      SurpriseParams sp;
      sp.p_threshold = pt;
      auto flags = DetectNarratives(now, h, today, sp, {});
      std::set<PairKey> s(flags.begin(), flags.end());
      for (const auto& k : prev) CHECK(s.contains(k));
      prev = flags;
    }
  }
}

TEST_CASE("update_narrative lifecycle") {
  std::vector<Document> pool;
  pool.reserve(10);
  const NarrativeContext ctx = Context(&pool);
  Narrative n;
  n.narrative_id = 1;
  n.key = {kMeasles, 201};
  n.opened_on = Day("2026-04-01");
  pool.push_back(Tagged("Measles cases rose in Tokyo schools.", {kMeasles}, {201}));
  UpdateNarrative(&n, Day("2026-04-01"), {&pool[0]}, ctx, {});
  CHECK(n.daily_counts.at(Day("2026-04-01")) == 1);
  CHECK(n.member_docs.size() == 1);
  CHECK(n.summary == std::vector<std::string>{"Measles cases rose in Tokyo schools."});

  UpdateNarrative(&n, Day("2026-04-02"), {}, ctx, {});
  CHECK(n.daily_counts.at(Day("2026-04-02")) == 0);

  for (int i = 0; i < 3; ++i) {
    pool.push_back(Tagged("Measles vaccination clinic number " + std::to_string(i) +
                              " opened. Officials urged parents to attend.",
                          {kMeasles}, {201}));
  }
  UpdateNarrative(&n, Day("2026-04-03"), {&pool[1], &pool[2], &pool[3]}, ctx, {});
  CHECK(n.member_docs.size() == 4);
  CHECK(n.daily_counts.at(Day("2026-04-03")) == 3);
  CHECK(n.summary.size() == 3);
  CHECK(n.summary != std::vector<std::string>{"Measles cases rose in Tokyo schools."});

  // A gap is zero-filled; keys stay contiguous.
  UpdateNarrative(&n, Day("2026-04-10"), {}, ctx, {});
  CHECK(n.daily_counts.size() == 10);
  Date expect = n.opened_on;
  for (const auto& [d, c] : n.daily_counts) {
    CHECK(d == expect);
    expect += std::chrono::days(1);
  }
  CHECK(n.zero_streak == 7);
  CHECK(n.status == NarrativeStatus::kActive);
  for (int i = 11; i <= 16; ++i) {
    UpdateNarrative(&n, Day("2026-04-01") + std::chrono::days(i - 1), {}, ctx, {});
  }
  CHECK(n.zero_streak == 13);
  CHECK(n.status == NarrativeStatus::kActive);
  UpdateNarrative(&n, Day("2026-04-17"), {}, ctx, {});
  CHECK(n.zero_streak == 14);
  CHECK(n.status == NarrativeStatus::kDormant);

  SUBCASE("new documents revive a dormant narrative") {
    pool.push_back(Tagged("Measles returns.", {kMeasles}, {201}));
    UpdateNarrative(&n, Day("2026-04-18"), {&pool.back()}, ctx, {});
    CHECK(n.status == NarrativeStatus::kActive);
    CHECK(n.zero_streak == 0);
  }

  SUBCASE("sixty zero days close it") {
    UpdateNarrative(&n, Day("2026-04-03") + std::chrono::days(59), {}, ctx, {});
    CHECK(n.zero_streak == 59);
    CHECK(n.status == NarrativeStatus::kDormant);
    UpdateNarrative(&n, Day("2026-04-03") + std::chrono::days(60), {}, ctx, {});
    CHECK(n.status == NarrativeStatus::kClosed);
    CHECK_THROWS_AS(UpdateNarrative(&n, Day("2026-07-01"), {}, ctx, {}), InvalidInput);
  }
}

TEST_CASE("change points") {
  auto build = [](auto words_for_day) {
    Narrative n;
    n.opened_on = Day("2026-05-01");
    for (int i = 0; i < 20; ++i) {
      const Date d = n.opened_on + std::chrono::days(i);
      n.daily_counts[d] = 1;
      n.daily_terms[d] = words_for_day(i);
    }
    return n;
  };
  TermCounts same{{"fever", 4}, {"clinic", 2}, {"school", 3}};
  Narrative flat = build([&](int) { return same; });
  for (const auto& [d, v] : ChangeDivergence(flat, {})) CHECK(v == doctest::Approx(0.0));
  CHECK(DetectChangePoints(flat, {}).empty());

  Narrative shift = build([](int i) {
    TermCounts t;
    for (int k = 0; k < 10; ++k) t[(i < 9 ? "old" : "new") + std::to_string(k)] = 20;
    return t;
  });
  const auto series = ChangeDivergence(shift, {});
  const Date day10 = Day("2026-05-10");
  REQUIRE(series.contains(day10));
  // Disjoint windows of 600 tokens over 10 words each; add-one smoothing
  // over the 20-word union gives 61/620 and 1/620 against a mean of 31/620.
  const double closed_form =
      10 * (61.0 / 620) * std::log2(61.0 / 31) + 10 * (1.0 / 620) * std::log2(1.0 / 31);
  CHECK(std::abs(series.at(day10) - closed_form) <= 1e-12);
  CHECK(series.at(day10) < 1.0);
  CHECK(DetectChangePoints(shift, {}) == std::vector<Date>{day10});

  Narrative short_span = build([&](int) { return same; });
  while (short_span.daily_counts.size() > 5) {
    short_span.daily_counts.erase(std::prev(short_span.daily_counts.end()));
  }
  CHECK(ChangeDivergence(short_span, {}).empty());
  CHECK(DetectChangePoints(short_span, {}).empty());
}

TEST_CASE("tracker opens, updates and lists narratives") {
  std::vector<Document> pool;
  pool.reserve(100);
  const NarrativeContext ctx = Context(&pool);
  NarrativeTracker tracker;
  const Date d0 = Day("2026-06-01");
  // Quiet background for a week, then a burst of measles in Shinjuku.
  for (int i = 0; i < 7; ++i) {
    pool.push_back(Tagged("Cholera case in Pune " + std::to_string(i) + ".", {kCholera}, {360}));
    tracker.RunDay(d0 + std::chrono::days(i), {&pool.back()}, ctx);
  }
  CHECK(tracker.narratives().empty());
  CHECK(tracker.ListForDate(d0 - std::chrono::days(3)).empty());
  std::vector<const Document*> burst;
  for (int i = 0; i < 4; ++i) {
    pool.push_back(Tagged("Measles cluster number " + std::to_string(i) + " in Shinjuku.",
                          {kMeasles}, {302}));
    burst.push_back(&pool.back());
  }
  const Date d7 = d0 + std::chrono::days(7);
  DayResult r = tracker.RunDay(d7, burst, ctx);
  // Shinjuku, Tokyo and Japan.
  CHECK(r.opened.size() == 3);
  auto listed = tracker.ListForDate(d7);
  CHECK(listed.size() == 3);
  for (const auto* n : listed) {
    CHECK(n->key.keyword == kMeasles);
    CHECK(n->member_docs.size() == 4);
  }
  CHECK_THROWS_AS(tracker.RunDay(d7, {}, ctx), InvalidInput);

  DayResult next = tracker.RunDay(d7 + std::chrono::days(1), {burst[0]}, ctx);
  CHECK(next.opened.empty());
  CHECK(next.updated.empty());  // already a member

  NarrativeTracker copy;
  copy.LoadJson(tracker.ToJson());
  CHECK(copy.ToJson() == tracker.ToJson());
  CHECK(copy.last_day() == tracker.last_day());
}
