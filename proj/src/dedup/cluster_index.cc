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

#include "epiwatch/dedup/cluster_index.h"

#include <algorithm>
#include <chrono>

#include "epiwatch/text/tokenize.h"
#include "epiwatch/util/error.h"

namespace epiwatch {

DedupRecord MakeDedupRecord(const Document& doc) {
  DedupRecord r;
  r.doc_id = doc.doc_id;
  r.published_at = doc.raw.published_at;
  r.fetched_at = doc.fetched_at;
  r.tokens = LowerTokens(doc.working_title);
  auto body = LowerTokens(doc.working_body);
  r.tokens.insert(r.tokens.end(), std::make_move_iterator(body.begin()),
                  std::make_move_iterator(body.end()));
  r.counts = doc.counts;
  return r;
}

DedupIndex::DedupIndex(DedupOptions options) : options_(options) {
  if (options_.shingle_width != 3 && options_.shingle_width != 4)
    throw ConfigError("shingle width must be 3 or 4");
  if (options_.sketch_size < 1) throw ConfigError("sketch size must be >= 1");
  if (!(options_.sketch_threshold >= 0 && options_.sketch_threshold <= 1) ||
      !(options_.triplet_threshold >= 0 && options_.triplet_threshold <= 1))
    throw ConfigError("dedup thresholds must lie in [0, 1]");
}

uint32_t DedupIndex::Root(uint32_t i) const {
  while (entries_[i].parent != i) {
    entries_[i].parent = entries_[entries_[i].parent].parent;
    i = entries_[i].parent;
  }
  return i;
}

void DedupIndex::Union(uint32_t a, uint32_t b) {
  uint32_t ra = Root(a);
  uint32_t rb = Root(b);
  if (ra == rb) return;
  if (members_[ra].size() < members_[rb].size()) std::swap(ra, rb);
  entries_[rb].parent = ra;
  auto& into = members_[ra];
  auto& from = members_[rb];
  into.insert(into.end(), from.begin(), from.end());
  members_.erase(rb);
  const uint64_t id = std::min(cluster_id_of_root_[ra], cluster_id_of_root_[rb]);
  root_of_cluster_.erase(cluster_id_of_root_[ra]);
  root_of_cluster_.erase(cluster_id_of_root_[rb]);
  cluster_id_of_root_.erase(rb);
  cluster_id_of_root_[ra] = id;
  root_of_cluster_[id] = ra;
}

ClusterDecision DedupIndex::Assign(const DedupRecord& record) {
  if (auto it = by_doc_.find(record.doc_id); it != by_doc_.end()) {
    ClusterDecision d;
    d.cluster_id = cluster_id_of_root_.at(Root(it->second));
    d.duplicate = members_.at(Root(it->second)).size() > 1;
    return d;
  }

  Entry e;
  e.doc_id = record.doc_id;
  e.published_at = record.published_at;
  e.fetched_at = record.fetched_at;
  const auto shingles = Shingle(record.tokens, options_.shingle_width);
  e.sketch = Sketch(shingles, options_.sketch_size);
  e.triplets = options_.shingle_width == 3 ? shingles : Shingle(record.tokens, 3);
  e.counts = record.counts;

  const auto index = static_cast<uint32_t>(entries_.size());
  e.parent = index;

  // Candidates: any indexed document sharing a sketch value.
  ++epoch_;
  stamp_.resize(entries_.size(), 0);
  std::vector<uint32_t> candidates;
  for (uint64_t h : e.sketch.hashes) {
    auto it = postings_.find(h);
    if (it == postings_.end()) continue;
    for (uint32_t c : it->second) {
      if (stamp_[c] == epoch_) continue;
      stamp_[c] = epoch_;
      candidates.push_back(c);
    }
  }
  std::sort(candidates.begin(), candidates.end());

  const auto window = std::chrono::days{options_.window_days};
  ClusterDecision decision;
  std::vector<uint32_t> confirmed;
  for (uint32_t c : candidates) {
    const Entry& other = entries_[c];
    const auto delta = e.published_at > other.published_at
                           ? e.published_at - other.published_at
                           : other.published_at - e.published_at;
    if (delta > window) continue;
    if (EstimateJaccard(e.sketch, other.sketch) < options_.sketch_threshold) continue;
    if (TripletOverlap(e.triplets, other.triplets) < options_.triplet_threshold) continue;
    confirmed.push_back(c);
    decision.matched.push_back(other.doc_id);
  }

  for (uint64_t h : e.sketch.hashes) postings_[h].push_back(index);
  by_doc_.emplace(e.doc_id, index);
  entries_.push_back(std::move(e));
  members_[index] = {index};
  const uint64_t own_id = static_cast<uint64_t>(index) + 1;
  cluster_id_of_root_[index] = own_id;
  root_of_cluster_[own_id] = index;

  for (uint32_t c : confirmed) Union(index, c);
  const uint32_t root = Root(index);
  decision.cluster_id = cluster_id_of_root_.at(root);
  decision.duplicate = !confirmed.empty();
  return decision;
}

bool DedupIndex::Contains(const std::string& doc_id) const {
  return by_doc_.contains(doc_id);
}

std::optional<uint64_t> DedupIndex::ClusterOf(const std::string& doc_id) const {
  auto it = by_doc_.find(doc_id);
  if (it == by_doc_.end()) return std::nullopt;
  return cluster_id_of_root_.at(Root(it->second));
}

bool DedupIndex::EarlierThan(uint32_t a, uint32_t b) const {
  const Entry& x = entries_[a];
  const Entry& y = entries_[b];
  if (x.published_at != y.published_at) return x.published_at < y.published_at;
  if (x.fetched_at != y.fetched_at) return x.fetched_at < y.fetched_at;
  return x.doc_id < y.doc_id;
}

uint32_t DedupIndex::ExemplarIndex(uint32_t root) const {
  const auto& members = members_.at(root);
  uint32_t best = members.front();
  for (uint32_t m : members) {
    if (EarlierThan(m, best)) best = m;
  }
  return best;
}

DuplicateCluster DedupIndex::Describe(uint32_t root) const {
  DuplicateCluster c;
  c.cluster_id = cluster_id_of_root_.at(root);
  auto members = members_.at(root);
  std::sort(members.begin(), members.end(),
            [this](uint32_t a, uint32_t b) { return EarlierThan(a, b); });
  const uint32_t exemplar = members.front();
  c.exemplar_id = entries_[exemplar].doc_id;
  const auto& base = entries_[exemplar].counts;
  for (uint32_t m : members) {
    c.member_ids.push_back(entries_[m].doc_id);
    if (m == exemplar) continue;
    for (const auto& count : entries_[m].counts) {
      const bool in_base = std::any_of(base.begin(), base.end(), [&](const CasualtyCount& b) {
        return b.SameMeasure(count);
      });
      if (!in_base) c.count_history.emplace_back(entries_[m].doc_id, count);
    }
  }
  std::sort(c.member_ids.begin(), c.member_ids.end());
  return c;
}

std::optional<DuplicateCluster> DedupIndex::Cluster(uint64_t cluster_id) const {
  auto it = root_of_cluster_.find(cluster_id);
  if (it == root_of_cluster_.end()) return std::nullopt;
  return Describe(it->second);
}

bool DedupIndex::IsExemplar(const std::string& doc_id) const {
  auto it = by_doc_.find(doc_id);
  if (it == by_doc_.end()) return false;
  return ExemplarIndex(Root(it->second)) == it->second;
}

std::vector<DuplicateCluster> DedupIndex::Clusters() const {
  std::vector<DuplicateCluster> out;
  for (const auto& [root, members] : members_) out.push_back(Describe(root));
  std::sort(out.begin(), out.end(), [](const DuplicateCluster& a, const DuplicateCluster& b) {
    return a.cluster_id < b.cluster_id;
  });
  return out;
}

}  // namespace epiwatch
