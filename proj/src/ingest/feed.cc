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

#include "epiwatch/ingest/feed.h"

#include <httplib.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <fstream>
#include <set>
#include <sstream>

#include "epiwatch/ingest/document_json.h"
#include "epiwatch/util/error.h"
#include "epiwatch/util/hash.h"
#include "epiwatch/util/text.h"

namespace epiwatch {

namespace pt = boost::property_tree;

std::vector<FeedConfig> ParseFeedConfigs(const nlohmann::json& j) {
  if (!j.is_array()) throw ConfigError("feed configuration must be a JSON array");
  std::vector<FeedConfig> feeds;
  std::set<std::string> ids;
  for (const auto& rec : j) {
    FeedConfig f;
    try {
      f.feed_id = rec.at("feed_id").get<std::string>();
      f.url = rec.at("url").get<std::string>();
      const auto kind = rec.value("kind", "rss");
      if (kind == "rss") {
        f.kind = FeedKind::kRss;
      } else if (kind == "jsonl_drop") {
        f.kind = FeedKind::kJsonlDrop;
      } else {
        throw ConfigError("feed " + f.feed_id + ": unknown kind " + kind);
      }
      f.publisher_country = rec.value("publisher_country", "");
      if (f.publisher_country == "unknown") f.publisher_country.clear();
      f.poll_interval_s = rec.value("poll_interval_s", 900);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("bad feed record: ") + e.what());
    }
    if (f.feed_id.empty()) throw ConfigError("feed_id must not be empty");
    if (f.poll_interval_s < 1) throw ConfigError("feed " + f.feed_id + ": poll_interval_s must be >= 1");
    if (!ids.insert(f.feed_id).second) throw ConfigError("duplicate feed_id " + f.feed_id);
    feeds.push_back(std::move(f));
  }
  return feeds;
}

std::vector<FeedConfig> LoadFeedConfigs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open feed configuration: " + path);
  try {
    return ParseFeedConfigs(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("malformed feed configuration " + path + ": " + e.what());
  }
}

uint64_t SeenSet::Key(std::string_view url, std::string_view title) {
  std::string k(url);
  k.push_back('\n');
  k.append(title);
  return Hash64(k, kSeenHashSeed);
}

bool SeenSet::Insert(const std::string& feed_id, uint64_t key) {
  std::lock_guard lock(mu_);
  if (!keys_[feed_id].insert(key).second) return false;
  fresh_.emplace_back(feed_id, key);
  return true;
}

bool SeenSet::Contains(const std::string& feed_id, uint64_t key) const {
  std::lock_guard lock(mu_);
  auto it = keys_.find(feed_id);
  return it != keys_.end() && it->second.contains(key);
}

size_t SeenSet::size() const {
  std::lock_guard lock(mu_);
  size_t n = 0;
  for (const auto& [id, keys] : keys_) n += keys.size();
  return n;
}

std::vector<std::pair<std::string, uint64_t>> SeenSet::TakeNew() {
  std::lock_guard lock(mu_);
  return std::exchange(fresh_, {});
}

namespace {

// Start offsets and lengths of top-level <tag ...>...</tag> elements.
std::vector<std::string_view> FindElements(std::string_view xml, std::string_view tag) {
  std::vector<std::string_view> out;
  const std::string open = "<" + std::string(tag);
  const std::string close = "</" + std::string(tag) + ">";
  size_t pos = 0;
  while ((pos = xml.find(open, pos)) != std::string_view::npos) {
    const size_t after = pos + open.size();
    if (after >= xml.size()) break;
    const char c = xml[after];
    if (c != '>' && c != ' ' && c != '\t' && c != '\n' && c != '\r' && c != '/') {
      pos = after;
      continue;
    }
    const size_t end = xml.find(close, after);
    const size_t next_open = xml.find(open, after);
    if (end == std::string_view::npos) {
      // Unterminated element: hand the remainder over so it is counted as
      // malformed.
      out.push_back(xml.substr(pos, next_open == std::string_view::npos ? std::string_view::npos
                                                                         : next_open - pos));
      if (next_open == std::string_view::npos) break;
      pos = next_open;
      continue;
    }
    if (next_open != std::string_view::npos && next_open < end) {
      out.push_back(xml.substr(pos, next_open - pos));
      pos = next_open;
      continue;
    }
    out.push_back(xml.substr(pos, end + close.size() - pos));
    pos = end + close.size();
  }
  return out;
}

std::string Text(const pt::ptree& node, const std::string& path) {
  auto child = node.get_child_optional(path);
  if (!child) return "";
  return std::string(Trim(child->data()));
}

std::string AtomLink(const pt::ptree& entry) {
  std::string fallback;
  for (const auto& [name, child] : entry) {
    if (name != "link") continue;
    const auto href = child.get<std::string>("<xmlattr>.href", "");
    const auto rel = child.get<std::string>("<xmlattr>.rel", "alternate");
    if (rel == "alternate" && !href.empty()) return href;
    if (fallback.empty()) fallback = href;
  }
  return fallback;
}

bool ParseItem(std::string_view block, bool atom, const FeedConfig& cfg, Timestamp now,
               RawArticle* out) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(block)};
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error&) {
    return false;
  }
  const auto& node = tree.get_child(atom ? "entry" : "item");
  RawArticle a;
  a.source_feed = cfg.feed_id;
  a.publisher_country = cfg.publisher_country;
  a.title = NormalizeWhitespace(StripTags(Text(node, "title")));
  std::string date;
  if (atom) {
    a.url = AtomLink(node);
    std::string body = Text(node, "content");
    if (body.empty()) body = Text(node, "summary");
    a.body = NormalizeWhitespace(StripTags(body));
    date = Text(node, "published");
    if (date.empty()) date = Text(node, "updated");
  } else {
    a.url = Text(node, "link");
    if (a.url.empty()) a.url = Text(node, "guid");
    std::string body = Text(node, "content:encoded");
    if (body.empty()) body = Text(node, "description");
    a.body = NormalizeWhitespace(StripTags(body));
    date = Text(node, "pubDate");
    if (date.empty()) date = Text(node, "dc:date");
  }
  if (a.title.empty() && a.body.empty()) return false;
  if (auto t = ParseTimestamp(date)) {
    a.published_at = *t;
  } else {
    a.published_at = now;
    a.published_at_fallback = true;
  }
  *out = std::move(a);
  return true;
}

}  // namespace

void ParseFeedXml(std::string_view xml, const FeedConfig& cfg, Timestamp now,
                  FetchResult* result) {
  auto items = FindElements(xml, "item");
  bool atom = false;
  if (items.empty()) {
    items = FindElements(xml, "entry");
    atom = true;
  }
  for (const auto& block : items) {
    RawArticle a;
    if (ParseItem(block, atom, cfg, now, &a)) {
      result->articles.push_back(std::move(a));
    } else {
      ++result->skipped_items;
    }
  }
}

void ParseJsonlDrop(std::string_view content, const FeedConfig& cfg, Timestamp now,
                    FetchResult* result) {
  size_t pos = 0;
  while (pos < content.size()) {
    size_t end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    const auto line = Trim(content.substr(pos, end - pos));
    pos = end + 1;
    if (line.empty()) continue;
    try {
      RawArticle a = RawArticleFromJson(nlohmann::json::parse(line), now);
      if (a.source_feed.empty()) a.source_feed = cfg.feed_id;
      if (a.publisher_country.empty()) a.publisher_country = cfg.publisher_country;
      if (Trim(a.title).empty() && Trim(a.body).empty()) {
        ++result->skipped_items;
        continue;
      }
      result->articles.push_back(std::move(a));
    } catch (const std::exception&) {
      ++result->skipped_items;
    }
  }
}

std::string ReadSource(const std::string& url, double timeout_seconds) {
  if (url.starts_with("http://") || url.starts_with("https://")) {
    const size_t host_end = url.find('/', url.find("://") + 3);
    const std::string origin = url.substr(0, host_end);
    const std::string path = host_end == std::string::npos ? "/" : url.substr(host_end);
    httplib::Client client(origin);
    const auto sec = static_cast<time_t>(timeout_seconds);
    client.set_connection_timeout(sec, 0);
    client.set_read_timeout(sec, 0);
    client.set_follow_location(true);
    auto res = client.Get(path);
    if (!res) throw FetchError("fetch " + url + " failed: " + httplib::to_string(res.error()));
    if (res->status >= 400) {
      throw FetchError("fetch " + url + " returned HTTP " + std::to_string(res->status));
    }
    return res->body;
  }
  const std::string path = url.starts_with("file://") ? url.substr(7) : url;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FetchError("cannot read feed source " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

FetchResult FetchFeed(const FeedConfig& cfg, SeenSet* seen, Timestamp now) {
  const std::string content = ReadSource(cfg.url);
  FetchResult parsed;
  if (cfg.kind == FeedKind::kRss) {
    ParseFeedXml(content, cfg, now, &parsed);
  } else {
    ParseJsonlDrop(content, cfg, now, &parsed);
  }
  FetchResult result;
  result.skipped_items = parsed.skipped_items;
  for (auto& a : parsed.articles) {
    if (seen && !seen->Insert(cfg.feed_id, SeenSet::Key(a.url, a.title))) {
      ++result.already_seen;
      continue;
    }
    result.articles.push_back(std::move(a));
  }
  return result;
}

}  // namespace epiwatch
