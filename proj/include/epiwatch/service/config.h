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

#ifndef EPIWATCH_SERVICE_CONFIG_H_
#define EPIWATCH_SERVICE_CONFIG_H_

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "epiwatch/dedup/cluster_index.h"
#include "epiwatch/geo/gazetteer.h"
#include "epiwatch/ingest/language.h"
#include "epiwatch/narratives/narratives.h"

namespace epiwatch {

// Everything tunable about the engine. Relative paths are resolved
// against data_dir.
struct EngineConfig {
  std::string data_dir = EPIWATCH_DATA_DIR;
  std::string lexicon = "lexicon.tsv";
  std::string blacklist = "blacklist.txt";
  std::string job_titles = "job_titles.txt";
  std::string stop_words = "stopwords.txt";
  std::string gazetteer = "gazetteer.tsv";
  std::string glossary = "glossary.tsv";
  std::string language_profiles = "langprofiles";
  std::set<std::string> semantic_types;  // empty = all

  std::vector<std::string> languages = DefaultLanguages();

  // "stub" or "http".
  std::string translator = "stub";
  std::string translator_url;
  double translator_timeout_s = 10.0;

  // Empty = zero model, every document scores 0.5.
  std::string model;
  // Override the thresholds stored in the model when set.
  std::optional<double> t_low;
  std::optional<double> t_high;

  DedupOptions dedup;
  SurpriseParams surprise;
  ChangeParams change;
  double adjacency_km = kDefaultAdjacencyKm;

  std::string Resolve(const std::string& path) const;
  // Throws ConfigError.
  void Validate() const;
};

// Keys mirror the field names, grouped as
//   {"data_dir", "lexicon", ..., "languages": [...],
//    "translator": {"kind", "url", "timeout_s"},
//    "relevance": {"model", "t_low", "t_high"},
//    "dedup": {"sketch_size", "shingle_width", "sketch_threshold",
//              "triplet_threshold", "window_days"},
//    "narratives": {"window_days", "p_threshold", "c_min", "lambda_floor",
//                   "change_window_days", "change_threshold"},
//    "geo": {"adjacency_km"}}
// Unknown keys are rejected so that typos do not silently fall back to
// defaults.
EngineConfig ParseEngineConfig(const nlohmann::json& j);
EngineConfig LoadEngineConfig(const std::string& path);
nlohmann::json ToJson(const EngineConfig& c);

}  // namespace epiwatch

#endif  // EPIWATCH_SERVICE_CONFIG_H_
