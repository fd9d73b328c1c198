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

#include "synthetic.h"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "epiwatch/ingest/document_json.h"
#include "epiwatch/ingest/normalize.h"
#include "epiwatch/text/counts.h"
#include "epiwatch/util/error.h"

namespace epiwatch::testing {
namespace {

namespace fs = std::filesystem;
using std::chrono::hours;

size_t Pick(std::mt19937_64& rng, size_t n) {
  return std::uniform_int_distribution<size_t>(0, n - 1)(rng);
}

bool Chance(std::mt19937_64& rng, double p) {
  return std::bernoulli_distribution(p)(rng);
}

std::vector<std::string> SplitSpaces(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::string Capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

}  // namespace

std::string DataPath(const std::string& name) {
  return std::string(EPIWATCH_DATA_DIR) + "/" + name;
}

std::string FixturePath(const std::string& name) {
  return std::string(EPIWATCH_TEST_FIXTURES) + "/" + name;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string MakeTempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  fs::path dir = fs::temp_directory_path() /
                 ("epiwatch-" + tag + "-" + std::to_string(::getpid()) + "-" +
                  std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

EngineConfig DefaultConfig() { return EngineConfig{}; }

std::shared_ptr<const Resources> SharedResources() {
  static const std::shared_ptr<const Resources> res = Resources::Load(DefaultConfig());
  return res;
}

Document MakeDoc(const std::string& title, const std::string& body,
                 const std::string& doc_id) {
  Document d;
  d.raw.title = title;
  d.raw.body = body;
  d.working_title = title;
  d.working_body = body;
  d.lang = "en";
  d.doc_id = doc_id.empty() ? ComputeDocId(title, body) : doc_id;
  return d;
}

std::vector<std::string> PseudoWords(size_t n, uint64_t seed) {
  static const char* kOnsets[] = {"b", "br", "c", "d", "dr", "f", "g", "gl", "h", "j",
                                  "k", "l", "m", "n", "p", "pl", "qu", "r", "s", "st",
                                  "t", "tr", "v", "w", "z"};
  static const char* kVowels[] = {"a", "e", "i", "o", "u", "ai", "ea", "ou"};
  static const char* kCodas[] = {"", "n", "r", "s", "l", "m", "x", "th"};
  std::mt19937_64 rng(seed);
  std::unordered_set<std::string> seen;
  std::vector<std::string> out;
  out.reserve(n);
  while (out.size() < n) {
    size_t syllables = 2 + Pick(rng, 3);
    std::string w;
    for (size_t i = 0; i < syllables; ++i) {
      w += kOnsets[Pick(rng, std::size(kOnsets))];
      w += kVowels[Pick(rng, std::size(kVowels))];
    }
    w += kCodas[Pick(rng, std::size(kCodas))];
    if (seen.insert(w).second) out.push_back(w);
  }
  return out;
}

std::string JoinWords(const std::vector<std::string>& words, size_t begin, size_t end) {
  std::string out;
  for (size_t i = begin; i < end && i < words.size(); ++i) {
    if (!out.empty()) out += ' ';
    out += words[i];
  }
  return out;
}

DedupCorpus MakeDedupCorpus(size_t bases, size_t paragraphs, size_t paragraph_tokens,
                            double substitution, uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::vector<std::string> vocab = PseudoWords(20000, seed ^ 0xD0D0);
  const Timestamp t0 = *ParseTimestamp("2026-03-01T00:00:00Z");
  auto word = [&] { return vocab[Pick(rng, vocab.size())]; };
  auto paragraph = [&] {
    std::vector<std::string> p;
    for (size_t i = 0; i < paragraph_tokens; ++i) p.push_back(word());
    return p;
  };

  DedupCorpus corpus;
  for (size_t b = 0; b < bases; ++b) {
    std::vector<std::string> title;
    for (int i = 0; i < 8; ++i) title.push_back(word());
    std::vector<std::vector<std::string>> paras;
    for (size_t i = 0; i < paragraphs; ++i) paras.push_back(paragraph());
    const bool planted = b == 0;
    if (planted) {
      for (const char* w : {"officials", "reported", "12", "deaths"}) paras[0].push_back(w);
    }
    // Bases spread over the month, several per hour.
    const Timestamp base_time = t0 + std::chrono::minutes(static_cast<int64_t>(b) * 17);

    auto emit = [&](const std::vector<std::string>& t,
                    const std::vector<std::vector<std::string>>& ps, Timestamp at) {
      std::string body;
      for (const auto& p : ps) {
        if (!body.empty()) body += "\n\n";
        body += JoinWords(p, 0, p.size());
      }
      DedupCorpus::Item item;
      item.doc = MakeDoc(JoinWords(t, 0, t.size()), body);
      item.doc.raw.published_at = at;
      item.doc.fetched_at = at + hours(1);
      item.doc.status = Status::kPublished;
      item.doc.counts = ExtractCounts(item.doc);
      item.truth = b;
      corpus.items.push_back(std::move(item));
      return corpus.items.back().doc.doc_id;
    };
    const std::string base_id = emit(title, paras, base_time);
    if (planted) corpus.planted_base_id = base_id;

    const size_t copies = planted ? 1 + Pick(rng, 5) : Pick(rng, 6);
    for (size_t c = 0; c < copies; ++c) {
      std::vector<std::string> t = title;
      std::vector<std::vector<std::string>> ps = paras;
      // Substitute exactly round(rate * n) distinct non-numeric tokens.
      std::vector<std::pair<size_t, size_t>> slots;  // (paragraph or npos for title, index)
      for (size_t i = 0; i < t.size(); ++i) slots.emplace_back(SIZE_MAX, i);
      for (size_t p = 0; p < ps.size(); ++p) {
        for (size_t i = 0; i < ps[p].size(); ++i) {
          if (!std::isdigit(static_cast<unsigned char>(ps[p][i][0]))) slots.emplace_back(p, i);
        }
      }
      std::shuffle(slots.begin(), slots.end(), rng);
      const size_t subs = static_cast<size_t>(std::lround(substitution * slots.size()));
      for (size_t s = 0; s < subs; ++s) {
        auto [p, i] = slots[s];
        (p == SIZE_MAX ? t[i] : ps[p][i]) = word();
      }
      const bool append = (planted && c == 0) || Chance(rng, 0.5);
      if (append) {
        ps.push_back(paragraph());
      } else {
        ps.erase(ps.begin() + static_cast<long>(1 + Pick(rng, ps.size() - 1)));
      }
      if (planted && c == 0) {
        for (auto& w : ps[0]) {
          if (w == "12") w = "15";
        }
      }
      const Timestamp at = base_time + hours(1 + static_cast<int64_t>(Pick(rng, 72)));
      const std::string id = emit(t, ps, at);
      if (planted && c == 0) corpus.planted_copy_id = id;
    }
  }
  std::shuffle(corpus.items.begin(), corpus.items.end(), rng);
  return corpus;
}

LabeledCorpus MakeLabeledCorpus(size_t n, double overlap, uint64_t seed) {
  const size_t per_class = 1000;
  const size_t shared = static_cast<size_t>(std::lround(overlap * per_class));
  const std::vector<std::string> words = PseudoWords(2 * per_class - shared, seed);
  std::mt19937_64 rng(seed + 1);
  LabeledCorpus out;
  for (size_t i = 0; i < n; ++i) {
    const bool relevant = i % 2 == 0;
    const size_t offset = relevant ? 0 : per_class - shared;
    auto word = [&] { return words[offset + Pick(rng, per_class)]; };
    const size_t len = 4 + Pick(rng, 57);
    std::string title, body;
    for (int t = 0; t < 3; ++t) title += (t ? " " : "") + word();
    for (size_t t = 0; t < len; ++t) body += (t ? " " : "") + word();
    Document d = MakeDoc(title, body);
    d.doc_id = ComputeDocId(title, body + " " + std::to_string(i));
    out.docs.push_back(std::move(d));
    out.labels.push_back(relevant);
  }
  return out;
}

namespace {

struct NewsGenerator {
  explicit NewsGenerator(uint64_t seed) : rng(seed), filler(PseudoWords(3000, seed ^ 0xF111)) {
    const Resources& res = *SharedResources();
    for (const auto& e : res.lexicon.entries()) {
      if (e.generic) continue;
      const std::string& s = e.surfaces.front();
      if (res.blacklist.contains(s)) continue;
      diseases.push_back(s);
    }
    for (const auto& g : res.gazetteer.entities()) {
      if (g.feature == FeatureClass::kLake || g.feature == FeatureClass::kRegion) continue;
      // ASCII names keep the generated text simple to eyeball.
      if (std::all_of(g.name.begin(), g.name.end(),
                      [](char c) { return static_cast<unsigned char>(c) < 0x80; })) {
        places.push_back(&g);
      }
    }
  }

  std::string Filler(size_t words) {
    std::string s;
    for (size_t i = 0; i < words; ++i) s += (i ? " " : "") + filler[Pick(rng, filler.size())];
    return s;
  }

  std::string Sentence(const std::string& place, const std::string& disease, bool relevant) {
    static const char* kHealth[] = {
        "Officials in {P} said {N} cases of {D} had been confirmed this week.",
        "The health ministry reported {M} deaths linked to {D} near {P}.",
        "Doctors in {P} say {H} hospitalized patients are being treated for {D}.",
        "Residents of {P} were urged to seek care if they develop symptoms of {D}.",
        "Laboratory tests confirmed {D} in samples collected around {P}.",
        "The regional authority in {P} opened an investigation into the {D} cluster.",
    };
    static const char* kOther[] = {
        "The council in {P} approved a new budget for road repairs.",
        "Fans in {P} celebrated after the local team won the final.",
        "Shares of companies based in {P} rose after the earnings report.",
        "A music festival in {P} drew thousands of visitors on the weekend.",
        "Traffic in {P} was disrupted by construction near the central station.",
        "The mayor of {P} announced plans for a new public library.",
    };
    std::string s = relevant ? kHealth[Pick(rng, std::size(kHealth))]
                             : kOther[Pick(rng, std::size(kOther))];
    auto replace = [&](const std::string& key, const std::string& value) {
      for (size_t pos; (pos = s.find(key)) != std::string::npos;) s.replace(pos, key.size(), value);
    };
    replace("{P}", place);
    replace("{D}", disease);
    replace("{N}", std::to_string(2 + Pick(rng, 400)));
    replace("{M}", std::to_string(1 + Pick(rng, 40)));
    replace("{H}", std::to_string(1 + Pick(rng, 90)));
    return s + " Reporters noted " + Filler(6 + Pick(rng, 8)) + ".";
  }

  std::pair<RawArticle, bool> Article(Timestamp published, bool relevant) {
    const GeoEntity& place = *places[Pick(rng, places.size())];
    const std::string disease = diseases[Pick(rng, diseases.size())];
    RawArticle a;
    static const char* kHealthTitles[] = {"{D} outbreak reported in {P}",
                                          "Health officials confirm {D} cases in {P}",
                                          "{P} investigates suspected {D} cluster"};
    static const char* kOtherTitles[] = {"{P} council approves new budget",
                                         "Local team wins final in {P}",
                                         "{P} markets rally after earnings"};
    std::string t = relevant ? kHealthTitles[Pick(rng, 3)] : kOtherTitles[Pick(rng, 3)];
    for (size_t pos; (pos = t.find("{P}")) != std::string::npos;) t.replace(pos, 3, place.name);
    for (size_t pos; (pos = t.find("{D}")) != std::string::npos;) {
      t.replace(pos, 3, pos == 0 ? Capitalize(disease) : disease);
    }
    a.title = t + " " + Filler(2);
    const size_t paragraphs = 3 + Pick(rng, 4);
    for (size_t p = 0; p < paragraphs; ++p) {
      if (p) a.body += "\n\n";
      const size_t sentences = 2 + Pick(rng, 3);
      for (size_t s = 0; s < sentences; ++s) {
        if (s) a.body += ' ';
        a.body += Sentence(place.name, disease, relevant);
      }
    }
    a.published_at = published;
    a.publisher_country = Chance(rng, 0.5) ? place.country_code : "";
    a.source_feed = relevant ? "health-wire" : "general-wire";
    a.url = "https://news.example/" + std::to_string(serial++);
    return {a, relevant};
  }

  RawArticle Republish(const RawArticle& base, Timestamp published) {
    RawArticle a = base;
    std::vector<std::string> words = SplitSpaces(a.body);
    const size_t subs = words.size() / 20;
    for (size_t i = 0; i < subs; ++i) {
      size_t k = Pick(rng, words.size());
      if (std::isalpha(static_cast<unsigned char>(words[k][0])) && std::islower(words[k][0])) {
        words[k] = filler[Pick(rng, filler.size())];
      }
    }
    a.body = JoinWords(words, 0, words.size()) + " Additional reporting by " + Filler(3) + ".";
    a.published_at = published;
    a.url = "https://mirror.example/" + std::to_string(serial++);
    return a;
  }

  std::mt19937_64 rng;
  std::vector<std::string> filler;
  std::vector<std::string> diseases;
  std::vector<const GeoEntity*> places;
  uint64_t serial = 0;
};

}  // namespace

std::vector<RawArticle> MakeNewsCorpus(const NewsOptions& options) {
  NewsGenerator gen(options.seed);
  const Timestamp start{*ParseDate(options.first_day)};
  const int64_t span_s = static_cast<int64_t>(options.days) * 86400;
  std::vector<RawArticle> out;
  out.reserve(options.articles);
  while (out.size() < options.articles) {
    const Timestamp at =
        start + std::chrono::seconds(static_cast<int64_t>(
                    Pick(gen.rng, static_cast<size_t>(span_s))));
    if (!out.empty() && Chance(gen.rng, options.republish_share)) {
      const RawArticle& base = out[Pick(gen.rng, out.size())];
      const Timestamp later = std::min(base.published_at + hours(1 + Pick(gen.rng, 12)),
                                       start + std::chrono::seconds(span_s - 1));
      out.push_back(gen.Republish(base, later));
      continue;
    }
    out.push_back(gen.Article(at, Chance(gen.rng, options.relevant_share)).first);
  }
  return out;
}

std::string MakeNewsLabels(size_t n, uint64_t seed) {
  NewsGenerator gen(seed);
  const Timestamp at = *ParseTimestamp("2026-01-01T00:00:00Z");
  std::string out;
  for (size_t i = 0; i < n; ++i) {
    auto [a, relevant] = gen.Article(at, i % 2 == 0);
    auto flat = [](std::string s) {
      std::replace(s.begin(), s.end(), '\t', ' ');
      std::replace(s.begin(), s.end(), '\n', ' ');
      return s;
    };
    out += std::string(relevant ? "1" : "0") + "\t" + flat(a.title) + "\t" + flat(a.body) + "\n";
  }
  return out;
}

std::string ToJsonLines(const std::vector<RawArticle>& articles) {
  std::string out;
  for (const auto& a : articles) {
    nlohmann::json j = a;
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace epiwatch::testing
