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

#include "epiwatch/ingest/language.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "epiwatch/util/error.h"
#include "epiwatch/util/text.h"

namespace epiwatch {

namespace {

// Sublinear trigram weight, so a few very common trigrams do not dominate
// short texts.
double Damp(double n) { return n > 0.0 ? 1.0 + std::log(n) : 0.0; }

}  // namespace

const std::vector<std::string>& DefaultLanguages() {
  static const std::vector<std::string> kLanguages = {
      "en", "fr", "es", "pt", "ru", "ar", "fa", "zh-Hans", "zh-Hant", "id"};
  return kLanguages;
}

TrigramCounts ExtractTrigrams(std::string_view text) {
  TrigramCounts counts;
  std::u32string run;
  auto flush = [&]() {
    if (run.empty()) return;
    const std::u32string padded = U" " + run + U" ";
    for (size_t i = 0; i + 3 <= padded.size(); ++i) counts[padded.substr(i, 3)] += 1.0;
    run.clear();
  };
  size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = NextCodepoint(text, &pos);
    if (IsAlpha(cp) || IsLogographic(cp)) {
      run.push_back(ToLower(cp));
    } else {
      flush();
    }
  }
  flush();
  return counts;
}

LanguageDetector LanguageDetector::FromDirectory(const std::string& dir,
                                                 const std::vector<std::string>& languages) {
  LanguageDetector detector;
  for (const auto& code : languages) {
    const std::string path = dir + "/" + code + ".txt";
    std::ifstream in(path);
    if (!in) throw ConfigError("missing language profile sample: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    detector.AddProfile(code, buf.str());
  }
  return detector;
}

void LanguageDetector::AddProfile(const std::string& code, std::string_view sample_text) {
  const auto all = ExtractTrigrams(sample_text);
  std::vector<std::pair<std::u32string, double>> ranked(all.begin(), all.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > kProfileSize) ranked.resize(kProfileSize);
  Profile p;
  p.code = code;
  double sq = 0.0;
  for (auto& [gram, n] : ranked) {
    const double w = Damp(n);
    sq += w * w;
    p.counts.emplace(std::move(gram), w);
  }
  p.norm = std::sqrt(sq);
  std::erase_if(profiles_, [&](const Profile& q) { return q.code == code; });
  profiles_.push_back(std::move(p));
}

std::map<std::string, double> LanguageDetector::Similarities(std::string_view text) const {
  std::map<std::string, double> out;
  const auto grams = ExtractTrigrams(text);
  double sq = 0.0;
  for (const auto& [g, n] : grams) sq += Damp(n) * Damp(n);
  const double norm = std::sqrt(sq);
  for (const auto& p : profiles_) {
    double dot = 0.0;
    for (const auto& [g, n] : grams) {
      if (auto it = p.counts.find(g); it != p.counts.end()) dot += Damp(n) * it->second;
    }
    out[p.code] = (norm == 0.0 || p.norm == 0.0) ? 0.0 : dot / (norm * p.norm);
  }
  return out;
}

std::string LanguageDetector::Detect(std::string_view text) const {
  if (Trim(text).empty()) throw InvalidInput("cannot detect language of empty text");
  const auto sims = Similarities(text);
  std::string best(kUndetermined);
  double best_score = -1.0;
  // Insertion order decides exact ties.
  for (const auto& p : profiles_) {
    const double s = sims.at(p.code);
    if (s > best_score) {
      best_score = s;
      best = p.code;
    }
  }
  if (best_score < kMinSimilarity) return std::string(kUndetermined);
  return best;
}

std::vector<std::string> LanguageDetector::languages() const {
  std::vector<std::string> codes;
  for (const auto& p : profiles_) codes.push_back(p.code);
  return codes;
}

}  // namespace epiwatch
