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

#include "epiwatch/service/config.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "epiwatch/util/error.h"

namespace epiwatch {

namespace {

using nlohmann::json;

void CheckKeys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown configuration key " + where + "." + key);
  }
}

template <typename T>
void Read(const json& j, const char* key, T* out) {
  if (j.contains(key)) *out = j.at(key).get<T>();
}

}  // namespace

std::string EngineConfig::Resolve(const std::string& path) const {
  if (path.empty() || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(data_dir) / path).string();
}

void EngineConfig::Validate() const {
  if (translator != "stub" && translator != "http") {
    throw ConfigError("translator kind must be stub or http, got " + translator);
  }
  if (translator == "http" && translator_url.empty()) {
    throw ConfigError("http translator needs a url");
  }
  if (languages.empty()) throw ConfigError("languages must not be empty");
  const double lo = t_low.value_or(0.0), hi = t_high.value_or(1.0);
  if (t_low && (lo < 0.0 || lo > 1.0)) throw ConfigError("t_low must be in [0, 1]");
  if (t_high && (hi < 0.0 || hi > 1.0)) throw ConfigError("t_high must be in [0, 1]");
  if (t_low && t_high && !(lo < hi)) throw ConfigError("t_low must be below t_high");
  if (dedup.sketch_size < 1) throw ConfigError("dedup.sketch_size must be >= 1");
  if (dedup.shingle_width != 3 && dedup.shingle_width != 4) {
    throw ConfigError("dedup.shingle_width must be 3 or 4");
  }
  for (double t : {dedup.sketch_threshold, dedup.triplet_threshold}) {
    if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("dedup thresholds must be in [0, 1]");
  }
  if (dedup.window_days < 0) throw ConfigError("dedup.window_days must be >= 0");
  surprise.Validate();
  if (change.window_days < 1) throw ConfigError("narratives.change_window_days must be >= 1");
  if (!(change.threshold >= 0.0 && change.threshold <= 1.0)) {
    throw ConfigError("narratives.change_threshold must be in [0, 1]");
  }
  if (!(adjacency_km >= 0.0) || !std::isfinite(adjacency_km)) {
    throw ConfigError("geo.adjacency_km must be a non-negative number");
  }
}

EngineConfig ParseEngineConfig(const json& j) {
  EngineConfig c;
  try {
    CheckKeys(j, "config",
              {"data_dir", "lexicon", "blacklist", "job_titles", "stop_words", "gazetteer",
               "glossary", "language_profiles", "semantic_types", "languages", "translator",
               "relevance", "dedup", "narratives", "geo"});
    Read(j, "data_dir", &c.data_dir);
    Read(j, "lexicon", &c.lexicon);
    Read(j, "blacklist", &c.blacklist);
    Read(j, "job_titles", &c.job_titles);
    Read(j, "stop_words", &c.stop_words);
    Read(j, "gazetteer", &c.gazetteer);
    Read(j, "glossary", &c.glossary);
    Read(j, "language_profiles", &c.language_profiles);
    Read(j, "semantic_types", &c.semantic_types);
    Read(j, "languages", &c.languages);
    if (j.contains("translator")) {
      const auto& t = j.at("translator");
      CheckKeys(t, "translator", {"kind", "url", "timeout_s"});
      Read(t, "kind", &c.translator);
      Read(t, "url", &c.translator_url);
      Read(t, "timeout_s", &c.translator_timeout_s);
    }
    if (j.contains("relevance")) {
      const auto& r = j.at("relevance");
      CheckKeys(r, "relevance", {"model", "t_low", "t_high"});
      Read(r, "model", &c.model);
      if (r.contains("t_low")) c.t_low = r.at("t_low").get<double>();
      if (r.contains("t_high")) c.t_high = r.at("t_high").get<double>();
    }
    if (j.contains("dedup")) {
      const auto& d = j.at("dedup");
      CheckKeys(d, "dedup",
                {"sketch_size", "shingle_width", "sketch_threshold", "triplet_threshold",
                 "window_days"});
      Read(d, "sketch_size", &c.dedup.sketch_size);
      Read(d, "shingle_width", &c.dedup.shingle_width);
      Read(d, "sketch_threshold", &c.dedup.sketch_threshold);
      Read(d, "triplet_threshold", &c.dedup.triplet_threshold);
      Read(d, "window_days", &c.dedup.window_days);
    }
    if (j.contains("narratives")) {
      const auto& n = j.at("narratives");
      CheckKeys(n, "narratives",
                {"window_days", "p_threshold", "c_min", "lambda_floor", "change_window_days",
                 "change_threshold"});
      Read(n, "window_days", &c.surprise.window_days);
      Read(n, "p_threshold", &c.surprise.p_threshold);
      Read(n, "c_min", &c.surprise.c_min);
      Read(n, "lambda_floor", &c.surprise.lambda_floor);
      Read(n, "change_window_days", &c.change.window_days);
      Read(n, "change_threshold", &c.change.threshold);
    }
    if (j.contains("geo")) {
      const auto& g = j.at("geo");
      CheckKeys(g, "geo", {"adjacency_km"});
      Read(g, "adjacency_km", &c.adjacency_km);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad configuration value: ") + e.what());
  }
  c.Validate();
  return c;
}

EngineConfig LoadEngineConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed configuration " + path + ": " + e.what());
  }
  return ParseEngineConfig(j);
}

json ToJson(const EngineConfig& c) {
  json relevance = {{"model", c.model}};
  if (c.t_low) relevance["t_low"] = *c.t_low;
  if (c.t_high) relevance["t_high"] = *c.t_high;
  return {
      {"data_dir", c.data_dir},
      {"lexicon", c.lexicon},
      {"blacklist", c.blacklist},
      {"job_titles", c.job_titles},
      {"stop_words", c.stop_words},
      {"gazetteer", c.gazetteer},
      {"glossary", c.glossary},
      {"language_profiles", c.language_profiles},
      {"semantic_types", c.semantic_types},
      {"languages", c.languages},
      {"translator",
       {{"kind", c.translator}, {"url", c.translator_url}, {"timeout_s", c.translator_timeout_s}}},
      {"relevance", relevance},
      {"dedup",
       {{"sketch_size", c.dedup.sketch_size},
        {"shingle_width", c.dedup.shingle_width},
        {"sketch_threshold", c.dedup.sketch_threshold},
        {"triplet_threshold", c.dedup.triplet_threshold},
        {"window_days", c.dedup.window_days}}},
      {"narratives",
       {{"window_days", c.surprise.window_days},
        {"p_threshold", c.surprise.p_threshold},
        {"c_min", c.surprise.c_min},
        {"lambda_floor", c.surprise.lambda_floor},
        {"change_window_days", c.change.window_days},
        {"change_threshold", c.change.threshold}}},
      {"geo", {{"adjacency_km", c.adjacency_km}}},
  };
}

}  // namespace epiwatch
