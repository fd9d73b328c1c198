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

#ifndef EPIWATCH_GEO_GAZETTEER_H_
#define EPIWATCH_GEO_GAZETTEER_H_

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "epiwatch/ingest/document.h"
#include "epiwatch/text/phrase_matcher.h"

namespace epiwatch {

using GeoId = int64_t;

enum class FeatureClass { kCountry, kAdmin1, kCity, kDistrict, kLake, kRegion };

std::string_view ToString(FeatureClass f);
std::optional<FeatureClass> ParseFeatureClass(std::string_view s);

struct GeoEntity {
  GeoId geo_id = 0;
  std::string name;
  std::vector<std::string> alt_names;
  double lat = 0.0;
  double lon = 0.0;
  FeatureClass feature = FeatureClass::kCity;
  std::string country_code;
  uint64_t population = 0;
  std::optional<GeoId> parent_id;
};

inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kDefaultAdjacencyKm = 500.0;

// Haversine great-circle distance.
double DistanceKm(const GeoEntity& a, const GeoEntity& b);

struct GazetteerDiagnostics {
  size_t rows_loaded = 0;
  std::vector<std::string> skipped_rows;  // "line N: reason"
  size_t missing_parents = 0;
  size_t broken_cycles = 0;
};

class Gazetteer {
 public:
  // TSV with header
  //   geo_id name alt_names lat lon feature country_code population parent_id
  // alt_names are pipe-separated; parent_id may be empty. Malformed rows are
  // skipped and reported; parents not present in the file are unset.
  // Throws ConfigError for a missing file or one with no data rows.
  static Gazetteer Load(const std::string& path,
                        GazetteerDiagnostics* diagnostics = nullptr);

  // Builds from records; rules as in Load.
  static Gazetteer FromEntities(std::vector<GeoEntity> entities,
                                GazetteerDiagnostics* diagnostics = nullptr);

  const GeoEntity* Find(GeoId id) const;
  // Throws NotFound.
  const GeoEntity& Get(GeoId id) const;

  // Case-insensitive lookup over names and alternate names.
  std::vector<GeoId> Candidates(std::string_view surface) const;

  const std::vector<GeoId>& Children(GeoId id) const;

  // Transitive closure of the children index, including `id`.
  std::set<GeoId> Expand(GeoId id) const;

  // Immediate parent first, root last.
  std::vector<GeoId> Ancestors(GeoId id) const;

  // Rule order: single candidate, candidate in the publisher's country
  // (largest population among several), largest population, unresolved.
  // Population ties go to the smallest geo_id.
  GeoMention Resolve(std::string_view surface,
                     std::string_view publisher_country) const;

  // Parent/child or siblings, or closer than `max_km`.
  bool Adjacent(GeoId a, GeoId b, double max_km = kDefaultAdjacencyKm) const;

  const PhraseMatcher& matcher() const { return matcher_; }
  size_t size() const { return entities_.size(); }
  const std::vector<GeoEntity>& entities() const { return entities_; }

 private:
  void Build(GazetteerDiagnostics* diagnostics);

  std::vector<GeoEntity> entities_;
  std::unordered_map<GeoId, size_t> by_id_;
  std::unordered_map<std::string, std::vector<GeoId>> names_;
  std::unordered_map<GeoId, std::vector<GeoId>> children_;
  PhraseMatcher matcher_;
};

// Longest-match gazetteer lookup over the working title and body. Matches
// that start with a lowercase letter are ignored ("turkey", "chad").
std::vector<GeoMention> TagGeo(const Document& doc, const Gazetteer& gaz);

}  // namespace epiwatch

#endif  // EPIWATCH_GEO_GAZETTEER_H_
