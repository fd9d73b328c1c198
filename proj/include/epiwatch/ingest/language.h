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

#ifndef EPIWATCH_INGEST_LANGUAGE_H_
#define EPIWATCH_INGEST_LANGUAGE_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace epiwatch {

inline constexpr std::string_view kUndetermined = "und";

// The ten default working languages.
const std::vector<std::string>& DefaultLanguages();

using TrigramCounts = std::map<std::u32string, double>;

// Codepoint trigrams of letter runs, each run padded with one space on both
// sides. Case-folded; digits and punctuation separate runs.
TrigramCounts ExtractTrigrams(std::string_view text);

// Character-trigram profile detector. Each language profile keeps its
// `profile_size` most frequent trigrams; a text is assigned the language
// with the highest cosine similarity, or "und" below `min_similarity`.
// Both vectors weight a trigram seen n times as 1 + ln(n).
class LanguageDetector {
 public:
  static constexpr size_t kProfileSize = 300;
  static constexpr double kMinSimilarity = 0.15;

  LanguageDetector() = default;

  // Reads "<dir>/<code>.txt" sample text for every code in `languages`.
  static LanguageDetector FromDirectory(const std::string& dir,
                                        const std::vector<std::string>& languages = DefaultLanguages());

  void AddProfile(const std::string& code, std::string_view sample_text);

  // Throws InvalidInput for text that is empty after trimming.
  std::string Detect(std::string_view text) const;

  // Similarity to every profile, for diagnostics.
  std::map<std::string, double> Similarities(std::string_view text) const;

  std::vector<std::string> languages() const;

 private:
  struct Profile {
    std::string code;
    TrigramCounts counts;
    double norm = 0.0;
  };
  std::vector<Profile> profiles_;
};

}  // namespace epiwatch

#endif  // EPIWATCH_INGEST_LANGUAGE_H_
