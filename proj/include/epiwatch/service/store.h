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

#ifndef EPIWATCH_SERVICE_STORE_H_
#define EPIWATCH_SERVICE_STORE_H_

#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "epiwatch/ingest/document.h"
#include "epiwatch/service/report.h"

namespace epiwatch {

struct StoredDocument {
  uint64_t seq = 0;  // arrival order
  // Seen-set entry of the feed item this document came from, if any.
  std::string seen_feed;
  std::optional<uint64_t> seen_key;
  Document doc;
};

struct AuditRecord {
  std::string doc_id;
  std::string decision;  // "publish" | "suppress"
  std::string actor;
  Timestamp at{};
  Status from = Status::kTriage;
  Status to = Status::kPublished;
};

nlohmann::json ToJson(const AuditRecord& a);
AuditRecord AuditFromJson(const nlohmann::json& j);

// Directory of append-only JSON-lines files:
//   docs-YYYY-MM-DD.jsonl  documents, by fetch date
//   audit.jsonl            triage decisions
//   reports.jsonl          analyst reports
//   narratives.json        tracker snapshot, replaced atomically
// Every record is flushed as soon as it is written, so a killed process
// loses at most the line it was writing. On open, a trailing partial line
// is cut off before anything is appended.
class Store {
 public:
  // Writable stores take an exclusive lock on the directory and create it
  // when missing. Throws ConfigError when the lock is held elsewhere.
  static std::unique_ptr<Store> Open(const std::string& dir, bool read_only = false);
  ~Store();

  struct Contents {
    std::vector<StoredDocument> docs;  // by seq
    std::vector<AuditRecord> audit;
    std::vector<Report> reports;
    std::optional<nlohmann::json> narratives;
  };
  Contents Load() const;

  void AppendDocument(const StoredDocument& d);
  void AppendAudit(const AuditRecord& a);
  void AppendReport(const Report& r);
  void SaveNarratives(const nlohmann::json& j);

  const std::string& dir() const { return dir_; }
  // Lines dropped on open because the previous writer died mid-line.
  size_t repaired_lines() const { return repaired_lines_; }

 private:
  Store(std::string dir, bool read_only);
  void AppendLine(const std::string& file, const std::string& line);

  std::string dir_;
  bool read_only_;
  int lock_fd_ = -1;
  size_t repaired_lines_ = 0;
  std::string open_name_;
  std::ofstream open_file_;
};

}  // namespace epiwatch

#endif  // EPIWATCH_SERVICE_STORE_H_
