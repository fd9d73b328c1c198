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

#ifndef EPIWATCH_SERVICE_REPORT_H_
#define EPIWATCH_SERVICE_REPORT_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "epiwatch/geo/gazetteer.h"
#include "epiwatch/ingest/document.h"
#include "epiwatch/text/lexicon.h"

namespace epiwatch {

struct Highlight {
  std::string doc_id;
  Field field = Field::kBody;
  Span span;  // into the document's working text
};

struct Report {
  uint64_t report_id = 0;
  std::string title;
  std::vector<std::string> doc_ids;
  std::vector<Highlight> highlights;
  std::string author;
  Timestamp created_at{};
};

nlohmann::json ToJson(const Report& r);
Report ReportFromJson(const nlohmann::json& j);

using DocFinder = std::function<const Document*(const std::string&)>;

// Throws ValidationError naming every unknown doc_id and every highlight
// whose span is not inside its field or does not fall on UTF-8 character
// boundaries.
void ValidateReport(const Report& r, const DocFinder& find);

// Self-contained HTML page; highlighted spans are wrapped in <mark>.
std::string RenderReportHtml(const Report& r, const DocFinder& find);

enum class NodeType { kKeyword, kLocation, kPerson, kOrganization };
std::string_view ToString(NodeType t);

struct GraphNode {
  NodeType type = NodeType::kKeyword;
  std::string id;
  std::string label;
  size_t weight = 0;  // documents in the match set mentioning it
};

struct GraphEdge {
  std::string source;  // node ids
  std::string target;
};

struct KnowledgeGraph {
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;
};

// Top `top_n` nodes of each type by document frequency, ties by id. Node
// ids are "keyword:<canonical_id>", "location:<geo_id>", "person:<name>"
// and "organization:<name>". Location nodes are linked when
// Gazetteer::Adjacent holds.
KnowledgeGraph BuildKnowledgeGraph(const std::vector<const Document*>& docs,
                                   const Gazetteer& gaz, const Lexicon& lexicon,
                                   size_t top_n = 10,
                                   double adjacency_km = kDefaultAdjacencyKm);
nlohmann::json ToJson(const KnowledgeGraph& g);

}  // namespace epiwatch

#endif  // EPIWATCH_SERVICE_REPORT_H_
