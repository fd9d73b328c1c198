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

#ifndef EPIWATCH_TEXT_RELEVANCE_H_
#define EPIWATCH_TEXT_RELEVANCE_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "epiwatch/ingest/document.h"

namespace epiwatch {

// Sorted by index, no duplicate indices.
using SparseVector = std::vector<std::pair<uint32_t, double>>;

inline constexpr uint32_t kDefaultFeatureDim = 1u << 20;
inline constexpr double kDefaultLowThreshold = 0.2;
inline constexpr double kDefaultHighThreshold = 0.8;

// Word 1-2 grams plus codepoint 3-5 grams of the lowercased working title
// and body, hashed into [0, dim). Grams do not cross the title/body
// boundary.
SparseVector Featurize(std::string_view title, std::string_view body,
                       uint32_t dim);
SparseVector Featurize(const Document& doc, uint32_t dim);

double Dot(const std::vector<double>& dense, const SparseVector& x);

struct RelevanceModel {
  uint32_t dim = kDefaultFeatureDim;
  uint64_t seed = 0;
  std::vector<double> weights;
  double bias = 0.0;
  double t_low = kDefaultLowThreshold;
  double t_high = kDefaultHighThreshold;

  // All-zero model; scores every document 0.5.
  static RelevanceModel Zero(uint32_t dim = kDefaultFeatureDim);

  // Throws ConfigError when dim is not a power of two, weights are not
  // finite or the thresholds are out of order.
  void Validate() const;

  double Margin(const SparseVector& x) const;
  void Save(const std::string& path) const;
  static RelevanceModel Load(const std::string& path);
};

struct TrainOptions {
  uint32_t dim = kDefaultFeatureDim;
  int epochs = 10;
  // L2 regularization strength of the hinge-loss objective.
  double reg = 1e-4;
  uint64_t seed = 1;
  double t_low = kDefaultLowThreshold;
  double t_high = kDefaultHighThreshold;
};

struct LabeledDocument {
  const Document* doc = nullptr;
  bool relevant = false;
};

// Minimizes the L2-regularized hinge loss by stochastic sub-gradient
// descent with 1/(reg * t) steps and norm projection. The bias is an extra
// always-on feature. Throws InvalidInput when only one label is present.
RelevanceModel TrainRelevance(const std::vector<LabeledDocument>& labeled,
                              const TrainOptions& options);

// logistic(margin). Clamped to stay strictly inside (0, 1).
double ScoreRelevance(const SparseVector& x, const RelevanceModel& model);
double ScoreRelevance(const Document& doc, const RelevanceModel& model);

// score >= t_high -> published, score < t_low -> suppressed, else triage.
Status Route(double score, double t_low, double t_high);

}  // namespace epiwatch

#endif  // EPIWATCH_TEXT_RELEVANCE_H_
