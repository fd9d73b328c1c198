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

#include "epiwatch/service/store.h"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <filesystem>
#include <sstream>

#include "epiwatch/ingest/document_json.h"
#include "epiwatch/util/error.h"
#include "epiwatch/util/hash.h"

namespace epiwatch {

namespace fs = std::filesystem;

namespace {

constexpr char kAuditFile[] = "audit.jsonl";
constexpr char kReportsFile[] = "reports.jsonl";
constexpr char kNarrativesFile[] = "narratives.json";
constexpr char kLockFile[] = "LOCK";

bool IsSegment(const std::string& name) {
  return name.size() == std::string("docs-YYYY-MM-DD.jsonl").size() &&
         name.starts_with("docs-") && name.ends_with(".jsonl");
}

std::string ReadAll(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Complete lines only; a trailing fragment without newline is ignored.
template <typename Fn>
void ForEachLine(const fs::path& path, Fn fn) {
  if (!fs::exists(path)) return;
  const std::string content = ReadAll(path);
  size_t pos = 0, line_no = 0;
  while (pos < content.size()) {
    const size_t end = content.find('\n', pos);
    if (end == std::string::npos) break;
    ++line_no;
    std::string_view line(content.data() + pos, end - pos);
    pos = end + 1;
    if (line.empty()) continue;
    try {
      fn(nlohmann::json::parse(line));
    } catch (const std::exception& e) {
      throw Error("corrupt record at " + path.string() + ":" + std::to_string(line_no) + ": " +
                  e.what());
    }
  }
}

// Cuts a trailing partial line. Returns true when something was removed.
bool RepairTail(const fs::path& path) {
  const auto size = fs::file_size(path);
  if (size == 0) return false;
  const std::string content = ReadAll(path);
  if (content.back() == '\n') return false;
  const size_t keep = content.rfind('\n');
  fs::resize_file(path, keep == std::string::npos ? 0 : keep + 1);
  return true;
}

}  // namespace

nlohmann::json ToJson(const AuditRecord& a) {
  return {{"doc_id", a.doc_id},       {"decision", a.decision},
          {"actor", a.actor},         {"at", FormatTimestamp(a.at)},
          {"from", ToString(a.from)}, {"to", ToString(a.to)}};
}

AuditRecord AuditFromJson(const nlohmann::json& j) {
  AuditRecord a;
  a.doc_id = j.at("doc_id").get<std::string>();
  a.decision = j.at("decision").get<std::string>();
  a.actor = j.at("actor").get<std::string>();
  auto t = ParseTimestamp(j.at("at").get<std::string>());
  if (!t) throw InvalidInput("bad audit timestamp");
  a.at = *t;
  a.from = ParseStatus(j.at("from").get<std::string>());
  a.to = ParseStatus(j.at("to").get<std::string>());
  return a;
}

Store::Store(std::string dir, bool read_only) : dir_(std::move(dir)), read_only_(read_only) {}

Store::~Store() {
  if (lock_fd_ >= 0) ::close(lock_fd_);
}

std::unique_ptr<Store> Store::Open(const std::string& dir, bool read_only) {
  std::unique_ptr<Store> store(new Store(dir, read_only));
  if (read_only) {
    if (!fs::is_directory(dir)) throw ConfigError("store directory does not exist: " + dir);
    return store;
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create store directory " + dir + ": " + ec.message());
  const auto lock_path = (fs::path(dir) / kLockFile).string();
  store->lock_fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (store->lock_fd_ < 0) {
    throw ConfigError("cannot open " + lock_path + ": " + std::strerror(errno));
  }
  if (::flock(store->lock_fd_, LOCK_EX | LOCK_NB) != 0) {
    throw ConfigError("store " + dir + " is locked by another writer");
  }
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl" &&
        RepairTail(entry.path())) {
      ++store->repaired_lines_;
    }
  }
  return store;
}

Store::Contents Store::Load() const {
  Contents c;
  std::vector<fs::path> segments;
  for (const auto& entry : fs::directory_iterator(dir_)) {
    if (entry.is_regular_file() && IsSegment(entry.path().filename().string())) {
      segments.push_back(entry.path());
    }
  }
  std::sort(segments.begin(), segments.end());
  for (const auto& seg : segments) {
    ForEachLine(seg, [&](const nlohmann::json& j) {
      StoredDocument d;
      d.seq = j.at("seq").get<uint64_t>();
      d.seen_feed = j.value("seen_feed", "");
      if (j.contains("seen_key")) d.seen_key = std::stoull(j.at("seen_key").get<std::string>(), nullptr, 16);
      d.doc = j.at("doc").get<Document>();
      c.docs.push_back(std::move(d));
    });
  }
  std::stable_sort(c.docs.begin(), c.docs.end(),
                   [](const StoredDocument& a, const StoredDocument& b) { return a.seq < b.seq; });
  ForEachLine(fs::path(dir_) / kAuditFile,
              [&](const nlohmann::json& j) { c.audit.push_back(AuditFromJson(j)); });
  ForEachLine(fs::path(dir_) / kReportsFile,
              [&](const nlohmann::json& j) { c.reports.push_back(ReportFromJson(j)); });
  const auto narratives = fs::path(dir_) / kNarrativesFile;
  if (fs::exists(narratives)) {
    try {
      c.narratives = nlohmann::json::parse(ReadAll(narratives));
    } catch (const nlohmann::json::exception& e) {
      throw Error("corrupt " + narratives.string() + ": " + e.what());
    }
  }
  return c;
}

void Store::AppendLine(const std::string& file, const std::string& line) {
  if (read_only_) throw Error("store opened read-only");
  if (open_name_ != file) {
    if (open_file_.is_open()) open_file_.close();
    open_file_.clear();
    open_file_.open(fs::path(dir_) / file, std::ios::app | std::ios::binary);
    if (!open_file_) throw Error("cannot append to " + file + " in " + dir_);
    open_name_ = file;
  }
  open_file_ << line << '\n';
  open_file_.flush();
  if (!open_file_) throw Error("write to " + file + " failed");
}

void Store::AppendDocument(const StoredDocument& d) {
  nlohmann::json j = {{"seq", d.seq}, {"doc", d.doc}};
  if (d.seen_key) {
    j["seen_feed"] = d.seen_feed;
    j["seen_key"] = ToHex(*d.seen_key);
  }
  AppendLine("docs-" + FormatDate(DateOf(d.doc.fetched_at)) + ".jsonl", j.dump());
}

void Store::AppendAudit(const AuditRecord& a) { AppendLine(kAuditFile, ToJson(a).dump()); }

void Store::AppendReport(const Report& r) { AppendLine(kReportsFile, ToJson(r).dump()); }

void Store::SaveNarratives(const nlohmann::json& j) {
  if (read_only_) throw Error("store opened read-only");
  const auto final_path = fs::path(dir_) / kNarrativesFile;
  const auto tmp_path = fs::path(dir_) / (std::string(kNarrativesFile) + ".tmp");
  {
    std::ofstream out(tmp_path, std::ios::trunc | std::ios::binary);
    out << j.dump();
    out.flush();
    if (!out) throw Error("cannot write " + tmp_path.string());
  }
  fs::rename(tmp_path, final_path);
}

}  // namespace epiwatch
