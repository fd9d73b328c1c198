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

#include "epiwatch/ingest/translation.h"

#include <httplib.h>

#include <algorithm>
#include <fstream>
#include <json.hpp>

#include "epiwatch/util/error.h"
#include "epiwatch/util/text.h"

namespace epiwatch {
namespace {

// Lowercases `text` codepoint by codepoint, recording for every byte of the
// output the byte offset of the source codepoint it came from.
std::string LowerWithOffsets(std::string_view text, std::vector<size_t>* offsets) {
  std::string out;
  size_t pos = 0;
  while (pos < text.size()) {
    const size_t start = pos;
    AppendUtf8(&out, ToLower(NextCodepoint(text, &pos)));
    offsets->resize(out.size(), start);
  }
  offsets->push_back(text.size());
  return out;
}

bool BoundaryBefore(std::string_view s, size_t i) {
  if (i == 0) return true;
  size_t b = i - 1;
  while (b > 0 && (static_cast<unsigned char>(s[b]) & 0xC0) == 0x80) --b;
  size_t p = b;
  return !IsAlnum(NextCodepoint(s, &p));
}

bool BoundaryAt(std::string_view s, size_t i) {
  if (i >= s.size()) return true;
  size_t p = i;
  return !IsAlnum(NextCodepoint(s, &p));
}

}  // namespace

StubTranslationClient StubTranslationClient::FromGlossary(const std::string& path,
                                                          const LanguageDetector* detector) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open glossary: " + path);
  StubTranslationClient client(detector);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty() || line[0] == '#') continue;
    const auto cols = Split(line, '\t');
    if (cols.size() != 3) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected 3 columns");
    }
    client.AddGlossaryEntry(std::string(Trim(cols[0])), std::string(Trim(cols[1])),
                            std::string(Trim(cols[2])));
  }
  return client;
}

void StubTranslationClient::AddGlossaryEntry(const std::string& src_lang,
                                             const std::string& phrase,
                                             const std::string& english) {
  auto& entries = glossary_[src_lang];
  entries.emplace_back(ToLowerUtf8(phrase), english);
  std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return a.first.size() > b.first.size();
  });
}

std::string StubTranslationClient::Detect(std::string_view text) {
  if (!detector_) return std::string(kUndetermined);
  return detector_->Detect(text);
}

std::string StubTranslationClient::Translate(std::string_view text, std::string_view src,
                                             std::string_view dst) {
  if (src == dst) return std::string(text);
  auto it = glossary_.find(std::string(src));
  if (it == glossary_.end() || dst != "en") return std::string(text);

  std::vector<size_t> offsets;
  const std::string lower = LowerWithOffsets(text, &offsets);
  // Replacement boundaries are computed on the lowered copy and mapped back.
  std::vector<std::tuple<size_t, size_t, const std::string*>> hits;
  std::vector<bool> taken(lower.size(), false);
  for (const auto& [phrase, english] : it->second) {
    if (phrase.empty()) continue;
    size_t from = 0;
    while ((from = lower.find(phrase, from)) != std::string::npos) {
      const size_t to = from + phrase.size();
      const bool free = std::none_of(taken.begin() + static_cast<long>(from),
                                     taken.begin() + static_cast<long>(to),
                                     [](bool t) { return t; });
      if (free && BoundaryBefore(lower, from) && BoundaryAt(lower, to)) {
        std::fill(taken.begin() + static_cast<long>(from), taken.begin() + static_cast<long>(to), true);
        hits.emplace_back(offsets[from], offsets[to], &english);
      }
      from = to;
    }
  }
  std::sort(hits.begin(), hits.end());
  std::string out;
  size_t cursor = 0;
  for (const auto& [b, e, english] : hits) {
    out.append(text.substr(cursor, b - cursor));
    out.append(*english);
    cursor = e;
  }
  out.append(text.substr(cursor));
  return out;
}

HttpTranslationClient::HttpTranslationClient(std::string base_url, double timeout_seconds)
    : base_url_(std::move(base_url)), timeout_seconds_(timeout_seconds) {
  // Split "http://host:port/prefix" into scheme+authority and path prefix.
  const size_t scheme = base_url_.find("://");
  const size_t path = base_url_.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (path != std::string::npos) {
    prefix_ = base_url_.substr(path);
    base_url_.resize(path);
    while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
  }
}

HttpTranslationClient::~HttpTranslationClient() = default;

std::string HttpTranslationClient::Post(const std::string& path, const std::string& body,
                                        const std::string& field) {
  httplib::Client client(base_url_);
  const auto sec = static_cast<time_t>(timeout_seconds_);
  const auto usec = static_cast<time_t>((timeout_seconds_ - static_cast<double>(sec)) * 1e6);
  client.set_connection_timeout(sec, usec);
  client.set_read_timeout(sec, usec);
  client.set_write_timeout(sec, usec);
  auto res = client.Post(prefix_ + path, body, "application/json");
  if (!res) {
    throw TranslationError("translation service unreachable: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw TranslationError("translation service returned HTTP " + std::to_string(res->status));
  }
  try {
    const auto j = nlohmann::json::parse(res->body);
    return j.at(field).get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw TranslationError(std::string("malformed translation response: ") + e.what());
  }
}

std::string HttpTranslationClient::Detect(std::string_view text) {
  return Post("/detect", nlohmann::json{{"text", text}}.dump(), "lang");
}

std::string HttpTranslationClient::Translate(std::string_view text, std::string_view src,
                                             std::string_view dst) {
  if (src == dst) return std::string(text);
  return Post("/translate", nlohmann::json{{"text", text}, {"from", src}, {"to", dst}}.dump(),
              "text");
}

WorkingText TranslateToWorking(const RawArticle& article, std::string_view lang,
                               TranslationClient& client) {
  WorkingText w{article.title, article.body, false};
  if (lang == "en" || lang == kUndetermined) return w;
  try {
    WorkingText translated;
    translated.title = article.title.empty() ? "" : client.Translate(article.title, lang, "en");
    translated.body = article.body.empty() ? "" : client.Translate(article.body, lang, "en");
    return translated;
  } catch (const std::exception&) {
    w.translation_pending = true;
    return w;
  }
}

}  // namespace epiwatch
