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

#include "epiwatch/geo/gazetteer.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>

#include "epiwatch/util/error.h"
#include "epiwatch/util/text.h"

namespace epiwatch {

std::string_view ToString(FeatureClass f) {
  switch (f) {
    case FeatureClass::kCountry: return "country";
    case FeatureClass::kAdmin1: return "admin1";
    case FeatureClass::kCity: return "city";
    case FeatureClass::kDistrict: return "district";
    case FeatureClass::kLake: return "lake";
    case FeatureClass::kRegion: return "region";
  }
  return "city";
}

std::optional<FeatureClass> ParseFeatureClass(std::string_view s) {
  if (s == "country") return FeatureClass::kCountry;
  if (s == "admin1") return FeatureClass::kAdmin1;
  if (s == "city") return FeatureClass::kCity;
  if (s == "district") return FeatureClass::kDistrict;
  if (s == "lake") return FeatureClass::kLake;
  if (s == "region") return FeatureClass::kRegion;
  return std::nullopt;
}

double DistanceKm(const GeoEntity& a, const GeoEntity& b) {
  constexpr double kRad = std::numbers::pi / 180.0;
  const double phi1 = a.lat * kRad;
  const double phi2 = b.lat * kRad;
  const double dphi = (b.lat - a.lat) * kRad;
  const double dlambda = (b.lon - a.lon) * kRad;
  const double s1 = std::sin(dphi / 2);
  const double s2 = std::sin(dlambda / 2);
  double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

namespace {

std::string NameKey(std::string_view name) {
  return PhraseMatcher::Key(LowerTokens(name));
}

template <typename T>
bool ParseNumber(std::string_view s, T* out) {
  s = Trim(s);
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && p == s.data() + s.size();
}

}  // namespace

Gazetteer Gazetteer::Load(const std::string& path,
                          GazetteerDiagnostics* diagnostics) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open gazetteer: " + path);
  GazetteerDiagnostics local;
  GazetteerDiagnostics* diag = diagnostics ? diagnostics : &local;
  *diag = {};

  std::vector<GeoEntity> entities;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    if (!header_seen) {
      header_seen = true;
      if (line.starts_with("geo_id")) continue;
    }
    const auto cols = Split(line, '\t');
    auto skip = [&](const std::string& why) {
      diag->skipped_rows.push_back("line " + std::to_string(line_no) + ": " + why);
    };
    if (cols.size() != 9) {
      skip("expected 9 columns, got " + std::to_string(cols.size()));
      continue;
    }
    GeoEntity e;
    if (!ParseNumber(cols[0], &e.geo_id)) {
      skip("bad geo_id");
      continue;
    }
    e.name = std::string(Trim(cols[1]));
    if (e.name.empty()) {
      skip("empty name");
      continue;
    }
    for (const auto& alt : Split(cols[2], '|')) {
      auto a = Trim(alt);
      if (!a.empty()) e.alt_names.emplace_back(a);
    }
    if (!ParseNumber(cols[3], &e.lat) || !ParseNumber(cols[4], &e.lon) ||
        e.lat < -90.0 || e.lat > 90.0 || e.lon <= -180.0 || e.lon > 180.0) {
      skip("bad coordinates");
      continue;
    }
    auto feature = ParseFeatureClass(Trim(cols[5]));
    if (!feature) {
      skip("bad feature class");
      continue;
    }
    e.feature = *feature;
    e.country_code = std::string(Trim(cols[6]));
    if (!ParseNumber(cols[7], &e.population)) {
      skip("bad population");
      continue;
    }
    const auto parent = Trim(cols[8]);
    if (!parent.empty()) {
      GeoId p;
      if (!ParseNumber(parent, &p)) {
        skip("bad parent_id");
        continue;
      }
      e.parent_id = p;
    }
    entities.push_back(std::move(e));
  }
  if (entities.empty()) throw ConfigError("gazetteer has no rows: " + path);
  return FromEntities(std::move(entities), diag);
}

Gazetteer Gazetteer::FromEntities(std::vector<GeoEntity> entities,
                                  GazetteerDiagnostics* diagnostics) {
  Gazetteer gaz;
  GazetteerDiagnostics local;
  GazetteerDiagnostics* diag = diagnostics ? diagnostics : &local;
  for (auto& e : entities) {
    if (gaz.by_id_.contains(e.geo_id)) {
      diag->skipped_rows.push_back("duplicate geo_id " + std::to_string(e.geo_id));
      continue;
    }
    gaz.by_id_.emplace(e.geo_id, gaz.entities_.size());
    gaz.entities_.push_back(std::move(e));
  }
  gaz.Build(diag);
  return gaz;
}

void Gazetteer::Build(GazetteerDiagnostics* diag) {
  for (auto& e : entities_) {
    if (e.parent_id && (!by_id_.contains(*e.parent_id) || *e.parent_id == e.geo_id)) {
      e.parent_id.reset();
      ++diag->missing_parents;
    }
  }
  // Break parent cycles at the entity where the walk first revisits a node.
  for (auto& e : entities_) {
    std::set<GeoId> seen{e.geo_id};
    GeoEntity* cur = &e;
    while (cur->parent_id) {
      GeoEntity* parent = &entities_[by_id_.at(*cur->parent_id)];
      if (!seen.insert(parent->geo_id).second) {
        cur->parent_id.reset();
        ++diag->broken_cycles;
        break;
      }
      cur = parent;
    }
  }
  for (const auto& e : entities_) {
    if (e.parent_id) children_[*e.parent_id].push_back(e.geo_id);
    auto add_name = [&](const std::string& n) {
      const std::string key = NameKey(n);
      if (key.empty()) return;
      auto& ids = names_[key];
      if (std::find(ids.begin(), ids.end(), e.geo_id) == ids.end()) ids.push_back(e.geo_id);
      matcher_.Add(n, 0);
    };
    add_name(e.name);
    for (const auto& alt : e.alt_names) add_name(alt);
  }
  for (auto& [id, kids] : children_) std::sort(kids.begin(), kids.end());
  for (auto& [key, ids] : names_) std::sort(ids.begin(), ids.end());
  diag->rows_loaded = entities_.size();
}

const GeoEntity* Gazetteer::Find(GeoId id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &entities_[it->second];
}

const GeoEntity& Gazetteer::Get(GeoId id) const {
  const GeoEntity* e = Find(id);
  if (!e) throw NotFound("unknown geo_id " + std::to_string(id));
  return *e;
}

std::vector<GeoId> Gazetteer::Candidates(std::string_view surface) const {
  auto it = names_.find(NameKey(surface));
  return it == names_.end() ? std::vector<GeoId>{} : it->second;
}

const std::vector<GeoId>& Gazetteer::Children(GeoId id) const {
  static const std::vector<GeoId> kNone;
  Get(id);
  auto it = children_.find(id);
  return it == children_.end() ? kNone : it->second;
}

std::set<GeoId> Gazetteer::Expand(GeoId id) const {
  Get(id);
  std::set<GeoId> out{id};
  std::vector<GeoId> stack{id};
  while (!stack.empty()) {
    const GeoId cur = stack.back();
    stack.pop_back();
    auto it = children_.find(cur);
    if (it == children_.end()) continue;
    for (GeoId child : it->second) {
      if (out.insert(child).second) stack.push_back(child);
    }
  }
  return out;
}

std::vector<GeoId> Gazetteer::Ancestors(GeoId id) const {
  std::vector<GeoId> chain;
  const GeoEntity* cur = &Get(id);
  while (cur->parent_id) {
    chain.push_back(*cur->parent_id);
    cur = &Get(*cur->parent_id);
  }
  return chain;
}

GeoMention Gazetteer::Resolve(std::string_view surface,
                              std::string_view publisher_country) const {
  if (Trim(surface).empty()) throw InvalidInput("empty place name");
  GeoMention m;
  m.surface = std::string(surface);
  const auto candidates = Candidates(surface);
  if (candidates.empty()) {
    m.method = ResolveMethod::kUnresolved;
    return m;
  }
  if (candidates.size() == 1) {
    m.resolved = candidates.front();
    m.method = ResolveMethod::kUnique;
    return m;
  }
  auto most_populous = [&](const std::vector<GeoId>& ids) {
    GeoId best = ids.front();
    for (GeoId id : ids) {
      const auto& a = Get(id);
      const auto& b = Get(best);
      if (a.population > b.population || (a.population == b.population && id < best))
        best = id;
    }
    return best;
  };
  if (!publisher_country.empty()) {
    std::vector<GeoId> local;
    for (GeoId id : candidates) {
      if (Get(id).country_code == publisher_country) local.push_back(id);
    }
    if (!local.empty()) {
      m.resolved = most_populous(local);
      m.method = ResolveMethod::kPublisherCountry;
      return m;
    }
  }
  m.resolved = most_populous(candidates);
  m.method = ResolveMethod::kPopulation;
  return m;
}

bool Gazetteer::Adjacent(GeoId a, GeoId b, double max_km) const {
  if (a == b) return false;
  const auto& ea = Get(a);
  const auto& eb = Get(b);
  if (ea.parent_id && *ea.parent_id == b) return true;
  if (eb.parent_id && *eb.parent_id == a) return true;
  if (ea.parent_id && eb.parent_id && *ea.parent_id == *eb.parent_id) return true;
  return DistanceKm(ea, eb) < max_km;
}

namespace {

void TagGeoField(const Document& doc, Field field, const Gazetteer& gaz,
                 std::vector<GeoMention>* out) {
  const std::string& text = doc.working(field);
  const auto tokens = Tokenize(text);
  size_t i = 0;
  while (i < tokens.size()) {
    PhraseMatcher::Match m;
    size_t pos = 0;
    const char32_t first = tokens[i].text.empty() ? 0 : NextCodepoint(tokens[i].text, &pos);
    if (IsLower(first)) {
      ++i;
      continue;
    }
    if (!gaz.matcher().MatchAt(tokens, i, &m)) {
      ++i;
      continue;
    }
    const Span span{tokens[i].span.begin, tokens[i + m.token_count - 1].span.end};
    GeoMention g = gaz.Resolve(text.substr(span.begin, span.size()),
                               doc.raw.publisher_country);
    g.span = span;
    g.field = field;
    out->push_back(std::move(g));
    i += m.token_count;
  }
}

}  // namespace

std::vector<GeoMention> TagGeo(const Document& doc, const Gazetteer& gaz) {
  std::vector<GeoMention> mentions;
  TagGeoField(doc, Field::kTitle, gaz, &mentions);
  TagGeoField(doc, Field::kBody, gaz, &mentions);
  return mentions;
}

}  // namespace epiwatch
