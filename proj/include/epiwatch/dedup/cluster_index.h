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

#ifndef EPIWATCH_DEDUP_CLUSTER_INDEX_H_
#define EPIWATCH_DEDUP_CLUSTER_INDEX_H_

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "epiwatch/dedup/sketch.h"
#include "epiwatch/ingest/document.h"

namespace epiwatch {

struct DedupOptions {
  size_t sketch_size = kDefaultSketchSize;
  int shingle_width = kDefaultShingleWidth;
  double sketch_threshold = 0.6;
  double triplet_threshold = 0.5;
  // Candidates must be published within this many days of each other.
  int window_days = 7;
};

// What the index needs to know about a document.
struct DedupRecord {
  std::string doc_id;
  Timestamp published_at{};
  Timestamp fetched_at{};
  std::vector<std::string> tokens;  // lowercased, title then body
  std::vector<CasualtyCount> counts;
};

DedupRecord MakeDedupRecord(const Document& doc);

struct DuplicateCluster {
  uint64_t cluster_id = 0;
  std::vector<std::string> member_ids;  // sorted
  std::string exemplar_id;
  // Counts in non-exemplar members that differ from the exemplar's, in
  // publication order.
  std::vector<std::pair<std::string, CasualtyCount>> count_history;
};

struct ClusterDecision {
  uint64_t cluster_id = 0;
  bool duplicate = false;
  std::vector<std::string> matched;  // confirmed near-duplicates
};

// Near-duplicate clustering. A document joins every cluster holding a
// confirmed duplicate (sketch estimate and triplet overlap both at or above
// threshold); clusters reached through several members are merged. The
// resulting partition is the connected components of the confirmed-pair
// graph and therefore independent of arrival order. Not thread-safe; the
// caller serializes writers.
class DedupIndex {
 public:
  explicit DedupIndex(DedupOptions options = {});

  // Idempotent for a doc_id already present.
  ClusterDecision Assign(const DedupRecord& record);

  bool Contains(const std::string& doc_id) const;
  std::optional<uint64_t> ClusterOf(const std::string& doc_id) const;
  std::optional<DuplicateCluster> Cluster(uint64_t cluster_id) const;
  bool IsExemplar(const std::string& doc_id) const;
  std::vector<DuplicateCluster> Clusters() const;
  size_t size() const { return entries_.size(); }
  const DedupOptions& options() const { return options_; }

 private:
  struct Entry {
    std::string doc_id;
    Timestamp published_at{};
    Timestamp fetched_at{};
    BottomKSketch sketch;
    std::vector<uint64_t> triplets;
    std::vector<CasualtyCount> counts;
    uint32_t parent = 0;
  };

  uint32_t Root(uint32_t i) const;
  void Union(uint32_t a, uint32_t b);
  uint32_t ExemplarIndex(uint32_t root) const;
  DuplicateCluster Describe(uint32_t root) const;
  bool EarlierThan(uint32_t a, uint32_t b) const;

  DedupOptions options_;
  mutable std::vector<Entry> entries_;
  std::unordered_map<std::string, uint32_t> by_doc_;
  std::unordered_map<uint64_t, std::vector<uint32_t>> postings_;
  // Root -> members and cluster id (the id of the earliest-arrived member).
  std::unordered_map<uint32_t, std::vector<uint32_t>> members_;
  std::unordered_map<uint32_t, uint64_t> cluster_id_of_root_;
  std::unordered_map<uint64_t, uint32_t> root_of_cluster_;
  std::vector<uint32_t> stamp_;
  uint32_t epoch_ = 0;
};

}  // namespace epiwatch

#endif  // EPIWATCH_DEDUP_CLUSTER_INDEX_H_
