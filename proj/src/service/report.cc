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

#include "epiwatch/service/report.h"

#include <algorithm>
#include <map>
#include <set>

#include "epiwatch/ingest/document_json.h"
#include "epiwatch/util/error.h"

namespace epiwatch {

namespace {

bool IsBoundary(const std::string& text, size_t pos) {
  return pos == text.size() ||
         (pos < text.size() && (static_cast<unsigned char>(text[pos]) & 0xC0) != 0x80);
}

void AppendEscaped(std::string* out, std::string_view text) {
  for (char c : text) {
    switch (c) {
      case '&': *out += "&amp;"; break;
      case '<': *out += "&lt;"; break;
      case '>': *out += "&gt;"; break;
      case '"': *out += "&quot;"; break;
      case '\'': *out += "&#39;"; break;
      default: out->push_back(c);
    }
  }
}

std::string Escape(std::string_view text) {
  std::string out;
  AppendEscaped(&out, text);
  return out;
}

// Overlapping and touching spans are merged so marks never nest.
std::string MarkedText(const std::string& text, std::vector<Span> spans) {
  std::sort(spans.begin(), spans.end(),
            [](const Span& a, const Span& b) { return a.begin < b.begin; });
  std::vector<Span> merged;
  for (const auto& s : spans) {
    if (s.begin == s.end) continue;
    if (!merged.empty() && s.begin <= merged.back().end) {
      merged.back().end = std::max(merged.back().end, s.end);
    } else {
      merged.push_back(s);
    }
  }
  std::string out;
  size_t pos = 0;
  for (const auto& s : merged) {
    AppendEscaped(&out, std::string_view(text).substr(pos, s.begin - pos));
    out += "<mark>";
    AppendEscaped(&out, std::string_view(text).substr(s.begin, s.size()));
    out += "</mark>";
    pos = s.end;
  }
  AppendEscaped(&out, std::string_view(text).substr(pos));
  return out;
}

constexpr std::string_view kStyle =
    "body{font-family:sans-serif;max-width:48em;margin:2em auto;line-height:1.5}"
    "article{border-top:1px solid #ccc;padding:1em 0}"
    ".meta{color:#555;font-size:.9em}"
    "mark{background:#ffe066}";

}  // namespace

nlohmann::json ToJson(const Report& r) {
  auto highlights = nlohmann::json::array();
  for (const auto& h : r.highlights) {
    highlights.push_back({{"doc_id", h.doc_id}, {"field", ToString(h.field)}, {"span", h.span}});
  }
  return {
      {"report_id", r.report_id},
      {"title", r.title},
      {"doc_ids", r.doc_ids},
      {"highlights", highlights},
      {"author", r.author},
      {"created_at", FormatTimestamp(r.created_at)},
  };
}

Report ReportFromJson(const nlohmann::json& j) {
  Report r;
  try {
    r.report_id = j.value("report_id", uint64_t{0});
    r.title = j.value("title", "");
    r.author = j.value("author", "");
    if (j.contains("doc_ids")) r.doc_ids = j.at("doc_ids").get<std::vector<std::string>>();
    if (j.contains("highlights")) {
      for (const auto& h : j.at("highlights")) {
        Highlight hl;
        hl.doc_id = h.at("doc_id").get<std::string>();
        hl.field = ParseField(h.value("field", "body"));
        hl.span = h.at("span").get<Span>();
        r.highlights.push_back(std::move(hl));
      }
    }
    if (j.contains("created_at")) {
      auto t = ParseTimestamp(j.at("created_at").get<std::string>());
      if (!t) throw InvalidInput("bad created_at");
      r.created_at = *t;
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed report: ") + e.what());
  }
  return r;
}

void ValidateReport(const Report& r, const DocFinder& find) {
  std::vector<std::string> offenders;
  std::set<std::string> reported;
  for (const auto& id : r.doc_ids) {
    if (!find(id) && reported.insert(id).second) offenders.push_back("unknown doc_id " + id);
  }
  for (size_t i = 0; i < r.highlights.size(); ++i) {
    const auto& h = r.highlights[i];
    const std::string where = "highlight " + std::to_string(i);
    const Document* doc = find(h.doc_id);
    if (!doc) {
      offenders.push_back(where + ": unknown doc_id " + h.doc_id);
      continue;
    }
    const std::string& text = doc->working(h.field);
    if (h.span.begin > h.span.end || h.span.end > text.size()) {
      offenders.push_back(where + ": span [" + std::to_string(h.span.begin) + ", " +
                          std::to_string(h.span.end) + ") outside " +
                          std::string(ToString(h.field)) + " of length " +
                          std::to_string(text.size()));
    } else if (!IsBoundary(text, h.span.begin) || !IsBoundary(text, h.span.end)) {
      offenders.push_back(where + ": span splits a UTF-8 character");
    }
  }
  if (!offenders.empty()) throw ValidationError(std::move(offenders));
}

std::string RenderReportHtml(const Report& r, const DocFinder& find) {
  std::map<std::pair<std::string, Field>, std::vector<Span>> marks;
  for (const auto& h : r.highlights) marks[{h.doc_id, h.field}].push_back(h.span);

  std::string html = "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n";
  html += "<title>" + Escape(r.title) + "</title>\n<style>";
  html += kStyle;
  html += "</style>\n</head>\n<body>\n<h1>" + Escape(r.title) + "</h1>\n";
  html += "<p class=\"meta\">Report " + std::to_string(r.report_id) + " by " +
          Escape(r.author) + ", " + FormatTimestamp(r.created_at) + "</p>\n";
  for (const auto& id : r.doc_ids) {
    const Document* doc = find(id);
    if (!doc) continue;
    html += "<article id=\"doc-" + Escape(id) + "\">\n<h2>" +
            MarkedText(doc->working_title, marks[{id, Field::kTitle}]) + "</h2>\n";
    html += "<p class=\"meta\">" + Escape(doc->raw.source_feed) + " | " +
            FormatTimestamp(doc->raw.published_at) + " | " + Escape(doc->lang);
    if (!doc->raw.url.empty()) {
      html += " | <a href=\"" + Escape(doc->raw.url) + "\">source</a>";
    }
    html += "</p>\n<p>" + MarkedText(doc->working_body, marks[{id, Field::kBody}]) +
            "</p>\n</article>\n";
  }
  html += "</body>\n</html>\n";
  return html;
}

std::string_view ToString(NodeType t) {
  switch (t) {
    case NodeType::kKeyword: return "keyword";
    case NodeType::kLocation: return "location";
    case NodeType::kPerson: return "person";
    case NodeType::kOrganization: return "organization";
  }
  return "keyword";
}

KnowledgeGraph BuildKnowledgeGraph(const std::vector<const Document*>& docs,
                                   const Gazetteer& gaz, const Lexicon& lexicon,
                                   size_t top_n, double adjacency_km) {
  struct Tally {
    std::string label;
    size_t count = 0;
  };
  std::map<std::string, Tally> by_type[4];
  std::map<std::string, GeoId> location_ids;
  for (const Document* d : docs) {
    std::set<std::string> seen[4];
    for (const auto& m : d->keyword_mentions) seen[0].insert(m.canonical_id);
    for (const auto& m : d->geo_mentions) {
      if (m.method == ResolveMethod::kUnresolved || !gaz.Find(m.resolved)) continue;
      auto key = std::to_string(m.resolved);
      location_ids[key] = m.resolved;
      seen[1].insert(key);
    }
    for (const auto& e : d->entity_mentions) {
      seen[e.kind == EntityKind::kPerson ? 2 : 3].insert(e.name);
    }
    for (int t = 0; t < 4; ++t) {
      for (const auto& key : seen[t]) ++by_type[t][key].count;
    }
  }
  static constexpr NodeType kTypes[4] = {NodeType::kKeyword, NodeType::kLocation,
                                         NodeType::kPerson, NodeType::kOrganization};
  KnowledgeGraph g;
  std::vector<std::pair<std::string, GeoId>> kept_locations;
  for (int t = 0; t < 4; ++t) {
    std::vector<std::pair<std::string, size_t>> ranked;
    for (const auto& [key, tally] : by_type[t]) ranked.emplace_back(key, tally.count);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    if (ranked.size() > top_n) ranked.resize(top_n);
    for (const auto& [key, count] : ranked) {
      GraphNode n;
      n.type = kTypes[t];
      n.id = std::string(ToString(n.type)) + ":" + key;
      n.weight = count;
      switch (n.type) {
        case NodeType::kKeyword: {
          const auto* e = lexicon.Find(key);
          n.label = e ? e->preferred_name : key;
          break;
        }
        case NodeType::kLocation:
          n.label = gaz.Get(location_ids[key]).name;
          kept_locations.emplace_back(n.id, location_ids[key]);
          break;
        default:
          n.label = key;
      }
      g.nodes.push_back(std::move(n));
    }
  }
  for (size_t i = 0; i < kept_locations.size(); ++i) {
    for (size_t j = i + 1; j < kept_locations.size(); ++j) {
      if (gaz.Adjacent(kept_locations[i].second, kept_locations[j].second, adjacency_km)) {
        g.edges.push_back({kept_locations[i].first, kept_locations[j].first});
      }
    }
  }
  return g;
}

nlohmann::json ToJson(const KnowledgeGraph& g) {
  auto nodes = nlohmann::json::array();
  for (const auto& n : g.nodes) {
    nodes.push_back(
        {{"id", n.id}, {"type", ToString(n.type)}, {"label", n.label}, {"weight", n.weight}});
  }
  auto edges = nlohmann::json::array();
  for (const auto& e : g.edges) {
    edges.push_back({{"source", e.source}, {"target", e.target}, {"kind", "adjacent"}});
  }
  return {{"nodes", nodes}, {"edges", edges}};
}

}  // namespace epiwatch
