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

#ifndef EPIWATCH_TESTS_SUPPORT_SYNTHETIC_H_
#define EPIWATCH_TESTS_SUPPORT_SYNTHETIC_H_

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "epiwatch/ingest/document.h"
#include "epiwatch/service/engine.h"

namespace epiwatch::testing {

std::string DataPath(const std::string& name);
std::string FixturePath(const std::string& name);
std::string ReadFile(const std::string& path);
// Fresh empty directory under the system temp dir.
std::string MakeTempDir(const std::string& tag);

// Resources from the shipped data directory, loaded once per process.
std::shared_ptr<const Resources> SharedResources();
EngineConfig DefaultConfig();

// Document with working text set and everything else defaulted.
Document MakeDoc(const std::string& title, const std::string& body,
                 const std::string& doc_id = "");

// Pronounceable lowercase pseudo-words, distinct from each other and from
// English stop words.
std::vector<std::string> PseudoWords(size_t n, uint64_t seed);

std::string JoinWords(const std::vector<std::string>& words, size_t begin, size_t end);

// Near-duplicate corpus: base articles of `paragraphs` paragraphs, each
// republished 0-5 times with `substitution` of tokens replaced and one
// paragraph appended or removed. Republications are published 1-72 hours
// after their base and arrive in shuffled order.
struct DedupCorpus {
  struct Item {
    Document doc;
    size_t truth = 0;  // index of the base article
  };
  std::vector<Item> items;  // arrival order
  std::string planted_base_id;
  std::string planted_copy_id;
};
DedupCorpus MakeDedupCorpus(size_t bases, size_t paragraphs, size_t paragraph_tokens,
                            double substitution, uint64_t seed);

// Two-class corpus whose class vocabularies share `overlap` of their words.
struct LabeledCorpus {
  std::vector<Document> docs;
  std::vector<bool> labels;
};
LabeledCorpus MakeLabeledCorpus(size_t n, double overlap, uint64_t seed);

// English-looking news articles built from lexicon keywords and gazetteer
// places, with filler text, casualty counts, and some republications.
// Roughly `relevant_share` are health stories; the rest are off-topic.
struct NewsOptions {
  size_t articles = 1000;
  std::string first_day = "2026-09-01";
  size_t days = 1;
  double relevant_share = 0.7;
  double republish_share = 0.1;
  uint64_t seed = 7;
};
std::vector<RawArticle> MakeNewsCorpus(const NewsOptions& options);
// Label TSV (label<TAB>title<TAB>body) for training on the same generator.
std::string MakeNewsLabels(size_t n, uint64_t seed);
std::string ToJsonLines(const std::vector<RawArticle>& articles);

}  // namespace epiwatch::testing

#endif  // EPIWATCH_TESTS_SUPPORT_SYNTHETIC_H_
