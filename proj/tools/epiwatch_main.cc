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

// epiwatch: operator command line for the surveillance engine.

#include <httplib.h>
#include <signal.h>

#include <CLI11.hpp>
#include <atomic>
#include <chrono>
#include <deque>
#include <fstream>
#include <iostream>
#include <thread>

#include "epiwatch/ingest/document_json.h"
#include "epiwatch/ingest/feed.h"
#include "epiwatch/service/config.h"
#include "epiwatch/service/engine.h"
#include "epiwatch/service/http_api.h"
#include "epiwatch/text/relevance.h"
#include "epiwatch/util/error.h"
#include "epiwatch/util/text.h"

namespace {

using namespace epiwatch;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct GlobalOptions {
  std::string config;
  std::string store = "epiwatch-store";
  std::string model;
  std::optional<double> sketch_threshold;
  std::optional<double> triplet_threshold;
  std::optional<int> shingle_width;
};

EngineConfig MakeConfig(const GlobalOptions& g) {
  EngineConfig c = g.config.empty() ? EngineConfig{} : LoadEngineConfig(g.config);
  if (!g.model.empty()) c.model = g.model;
  if (g.sketch_threshold) c.dedup.sketch_threshold = *g.sketch_threshold;
  if (g.triplet_threshold) c.dedup.triplet_threshold = *g.triplet_threshold;
  if (g.shingle_width) c.dedup.shingle_width = *g.shingle_width;
  c.Validate();
  return c;
}

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

// Blocks SIGINT and SIGTERM in every thread; WaitForSignal picks them up.
void BlockStopSignals() {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
}

void WaitForSignal() {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  int sig = 0;
  sigwait(&set, &sig);
}

json PollJson(const PollStats& s) {
  json j = {{"feed_id", s.feed_id},         {"fetched", s.fetched},
            {"ingested", s.ingested},       {"known_documents", s.known_documents},
            {"skipped_items", s.skipped_items}, {"already_seen", s.already_seen},
            {"rejected", s.rejected}};
  if (s.error) j["error"] = *s.error;
  return j;
}

int RunIngest(const GlobalOptions& g, const std::string& feeds_path, bool daemon) {
  const auto feeds = LoadFeedConfigs(feeds_path);
  if (daemon) BlockStopSignals();
  Engine engine(MakeConfig(g), Store::Open(g.store));
  if (!daemon) {
    for (const auto& s : engine.PollFeeds(feeds, Now())) std::cout << PollJson(s).dump() << "\n";
    return 0;
  }
  std::atomic<bool> stop{false};
  std::thread watcher([&] {
    WaitForSignal();
    stop = true;
  });
  watcher.detach();
  std::vector<Clock::time_point> due(feeds.size(), Clock::now());
  std::optional<Date> last_batch_day;
  while (!stop) {
    std::vector<FeedConfig> ready;
    std::vector<size_t> ready_idx;
    for (size_t i = 0; i < feeds.size(); ++i) {
      if (Clock::now() >= due[i]) {
        ready.push_back(feeds[i]);
        ready_idx.push_back(i);
        due[i] = Clock::now() + std::chrono::seconds(feeds[i].poll_interval_s);
      }
    }
    if (!ready.empty()) {
      for (const auto& s : engine.PollFeeds(ready, Now())) {
        std::cerr << PollJson(s).dump() << "\n";
      }
    }
    // Narratives for a day are computed once the day is over.
    const Date yesterday = DateOf(Now()) - std::chrono::days(1);
    if (!last_batch_day || *last_batch_day < yesterday) {
      engine.RunDailyBatch(yesterday);
      last_batch_day = yesterday;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(500));
  }
  std::cerr << "stopping\n";
  return 0;
}

int RunTrain(const std::string& labels_path, const std::string& out_path, TrainOptions opts) {
  std::ifstream in(labels_path);
  if (!in) throw ConfigError("cannot open " + labels_path);
  std::deque<Document> docs;
  std::vector<LabeledDocument> labeled;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty() || line[0] == '#') continue;
    auto cols = Split(line, '\t');
    if (cols.size() < 2 || cols.size() > 3) {
      throw InvalidInput(labels_path + ":" + std::to_string(line_no) +
                         ": expected label<TAB>title<TAB>body");
    }
    const auto label = std::string(Trim(cols[0]));
    bool relevant;
    if (label == "1" || label == "relevant") {
      relevant = true;
    } else if (label == "0" || label == "irrelevant") {
      relevant = false;
    } else {
      throw InvalidInput(labels_path + ":" + std::to_string(line_no) + ": bad label " + label);
    }
    Document& d = docs.emplace_back();
    d.working_title = NormalizeWhitespace(cols[1]);
    d.working_body = cols.size() == 3 ? NormalizeWhitespace(cols[2]) : "";
    labeled.push_back({&d, relevant});
  }
  const auto start = Clock::now();
  const RelevanceModel model = TrainRelevance(labeled, opts);
  size_t correct = 0;
  for (const auto& l : labeled) {
    correct += (ScoreRelevance(*l.doc, model) >= 0.5) == l.relevant;
  }
  model.Save(out_path);
  std::cout << json{{"documents", labeled.size()},
                    {"training_accuracy", static_cast<double>(correct) / labeled.size()},
                    {"seconds", Seconds(start)},
                    {"model", out_path}}
                   .dump()
            << "\n";
  return 0;
}

int RunReplay(const GlobalOptions& g, const std::string& corpus, const std::string& date_text) {
  const auto day = ParseDate(date_text);
  if (!day) throw InvalidInput("--date must be YYYY-MM-DD");
  std::ifstream in(corpus);
  if (!in) throw ConfigError("cannot open corpus " + corpus);
  const auto load_start = Clock::now();
  Engine engine(MakeConfig(g), Store::Open(g.store));
  const double load_seconds = Seconds(load_start);

  const auto ingest_start = Clock::now();
  size_t lines = 0, inserted = 0, known = 0, rejected = 0, malformed = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (Trim(line).empty()) continue;
    ++lines;
    RawArticle a;
    try {
      a = RawArticleFromJson(json::parse(line), Now());
    } catch (const std::exception&) {
      ++malformed;
      continue;
    }
    // Replayed articles are treated as fetched when they were published.
    const Timestamp fetched = a.published_at_fallback ? Now() : a.published_at;
    try {
      if (engine.Ingest(a, fetched).inserted) {
        ++inserted;
      } else {
        ++known;
      }
    } catch (const InvalidInput&) {
      ++rejected;
    }
  }
  const double ingest_seconds = Seconds(ingest_start);

  const auto batch_start = Clock::now();
  const auto days = engine.RunDailyBatch(*day);
  const double batch_seconds = Seconds(batch_start);
  size_t opened = 0, opened_on_date = 0;
  for (const auto& r : days) {
    opened += r.opened.size();
    if (r.day == *day) opened_on_date = r.opened.size();
  }
  std::cout << json{{"lines", lines},
                    {"inserted", inserted},
                    {"known_documents", known},
                    {"rejected", rejected},
                    {"malformed", malformed},
                    {"documents", engine.size()},
                    {"days_processed", days.size()},
                    {"narratives_opened", opened},
                    {"narratives_opened_on_date", opened_on_date},
                    {"load_seconds", load_seconds},
                    {"ingest_seconds", ingest_seconds},
                    {"batch_seconds", batch_seconds}}
                   .dump()
            << "\n";
  return 0;
}

int RunServe(const GlobalOptions& g, const std::string& addr) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos) throw InvalidInput("--addr must be host:port");
  const std::string host = addr.substr(0, colon);
  const int port = std::stoi(addr.substr(colon + 1));
  BlockStopSignals();
  Engine engine(MakeConfig(g), Store::Open(g.store));
  httplib::Server server;
  RegisterApi(&server, &engine);
  std::thread watcher([&] {
    WaitForSignal();
    server.stop();
  });
  watcher.detach();
  std::cerr << "serving " << engine.size() << " documents on " << host << ":" << port << "\n";
  if (!server.listen(host, port)) throw Error("cannot listen on " + addr);
  return 0;
}

int RunQuery(const GlobalOptions& g, const std::multimap<std::string, std::string>& params,
             bool facets) {
  Engine engine(MakeConfig(g), Store::Open(g.store, /*read_only=*/true));
  const Query q = ParseQuery(params);
  const json result = engine.SearchJson(q);
  for (const auto& doc : result.at("docs")) std::cout << doc.dump() << "\n";
  if (facets) {
    std::cout << json{{"total", result.at("total")},
                      {"facets", result.at("facets")},
                      {"map_counts", result.at("map_counts")}}
                     .dump()
              << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"epiwatch media surveillance engine"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--config", g.config, "JSON configuration file");
  app.add_option("--store", g.store, "store directory");
  app.add_option("--model", g.model, "relevance model file");
  app.add_option("--dedup-sketch-threshold", g.sketch_threshold, "sketch Jaccard threshold");
  app.add_option("--dedup-triplet-threshold", g.triplet_threshold, "word-triplet threshold");
  app.add_option("--shingle-width", g.shingle_width, "shingle width (3 or 4)");

  auto* ingest = app.add_subcommand("ingest", "poll feeds into the store");
  std::string feeds_path;
  bool once = false, daemon = false;
  ingest->add_option("--feeds", feeds_path, "feed configuration JSON")->required();
  auto* once_flag = ingest->add_flag("--once", once, "poll every feed once");
  ingest->add_flag("--daemon", daemon, "poll on each feed's interval until stopped")
      ->excludes(once_flag);

  auto* train = app.add_subcommand("train", "train a relevance model");
  std::string labels_path, out_path;
  TrainOptions topts;
  train->add_option("--labels", labels_path, "TSV label<TAB>title<TAB>body")->required();
  train->add_option("--out", out_path, "model output path")->required();
  train->add_option("--dim", topts.dim, "feature dimension (power of two)");
  train->add_option("--epochs", topts.epochs, "passes over the data");
  train->add_option("--reg", topts.reg, "L2 regularization strength");
  train->add_option("--seed", topts.seed, "shuffle seed");
  train->add_option("--t-low", topts.t_low, "suppress below this score");
  train->add_option("--t-high", topts.t_high, "publish at or above this score");

  auto* replay = app.add_subcommand("replay", "ingest a JSONL corpus and run the daily batch");
  std::string corpus, date_text;
  replay->add_option("--corpus", corpus, "one RawArticle JSON per line")->required();
  replay->add_option("--date", date_text, "run narrative batch through this date")->required();

  auto* serve = app.add_subcommand("serve", "serve the HTTP API");
  std::string addr = "127.0.0.1:8080";
  serve->add_option("--addr", addr, "host:port");

  auto* query = app.add_subcommand("query", "search the store, one JSON line per document");
  std::string q, geo, from, to, page, page_size;
  std::vector<std::string> keywords, statuses;
  bool facets = false;
  query->add_option("--q", q, "free-text terms (all must match)");
  query->add_option("--keyword", keywords, "lexicon canonical id");
  query->add_option("--geo", geo, "geo_id, includes places below it");
  query->add_option("--from", from, "YYYY-MM-DD");
  query->add_option("--to", to, "YYYY-MM-DD");
  query->add_option("--status", statuses, "published, triage, suppressed");
  query->add_option("--page", page, "page number from 0");
  query->add_option("--page-size", page_size, "results per page");
  query->add_flag("--facets", facets, "print facets as a final line");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      if (!once && !daemon) throw InvalidInput("ingest needs --once or --daemon");
      return RunIngest(g, feeds_path, daemon);
    }
    if (*train) return RunTrain(labels_path, out_path, topts);
    if (*replay) return RunReplay(g, corpus, date_text);
    if (*serve) return RunServe(g, addr);
    if (*query) {
      std::multimap<std::string, std::string> params;
      auto put = [&](const char* k, const std::string& v) {
        if (!v.empty()) params.emplace(k, v);
      };
      put("q", q);
      put("geo", geo);
      put("from", from);
      put("to", to);
      put("page", page);
      put("page_size", page_size);
      for (const auto& k : keywords) put("keyword", k);
      for (const auto& s : statuses) put("status", s);
      return RunQuery(g, params, facets);
    }
  } catch (const std::exception& e) {
    std::cerr << "epiwatch: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
