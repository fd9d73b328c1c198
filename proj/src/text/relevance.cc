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

#include "epiwatch/text/relevance.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <random>
#include <unordered_map>

#include "epiwatch/text/tokenize.h"
#include "epiwatch/util/error.h"
#include "epiwatch/util/hash.h"
#include "epiwatch/util/text.h"

namespace epiwatch {
namespace {

constexpr std::string_view kModelFormat = "epiwatch-relevance";
constexpr int kModelVersion = 1;

class FeatureAccumulator {
 public:
  explicit FeatureAccumulator(uint32_t dim) : mask_(dim - 1) {}

  void Add(std::string_view prefix, std::string_view gram) {
    buffer_.assign(prefix);
    buffer_.append(gram);
    const auto index = static_cast<uint32_t>(Hash64(buffer_, kFeatureHashSeed) & mask_);
    counts_[index] += 1.0;
  }

  SparseVector Finish() {
    SparseVector out(counts_.begin(), counts_.end());
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  uint64_t mask_;
  std::string buffer_;
  std::unordered_map<uint32_t, double> counts_;
};

void AddField(std::string_view text, FeatureAccumulator* acc) {
  const auto words = LowerTokens(text);
  for (size_t i = 0; i < words.size(); ++i) {
    acc->Add("w\x1f", words[i]);
    if (i + 1 < words.size()) acc->Add("b\x1f", words[i] + " " + words[i + 1]);
  }

  const std::string lower = ToLowerUtf8(text);
  std::vector<size_t> starts;
  size_t pos = 0;
  while (pos < lower.size()) {
    starts.push_back(pos);
    NextCodepoint(lower, &pos);
  }
  starts.push_back(lower.size());
  const size_t n = starts.size() - 1;
  const std::string_view view(lower);
  for (size_t len = 3; len <= 5; ++len) {
    for (size_t i = 0; i + len <= n; ++i) {
      acc->Add("c\x1f", view.substr(starts[i], starts[i + len] - starts[i]));
    }
  }
}

double Logistic(double z) {
  double s;
  if (z >= 0) {
    s = 1.0 / (1.0 + std::exp(-z));
  } else {
    const double e = std::exp(z);
    s = e / (1.0 + e);
  }
  constexpr double kEps = 1e-12;
  return std::clamp(s, kEps, 1.0 - kEps);
}

bool IsPowerOfTwo(uint32_t v) { return v != 0 && (v & (v - 1)) == 0; }

// Uniform integer in [0, bound) from a 64-bit engine, platform independent.
uint64_t Bounded(std::mt19937_64& rng, uint64_t bound) {
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % bound;
}

}  // namespace

SparseVector Featurize(std::string_view title, std::string_view body,
                       uint32_t dim) {
  if (!IsPowerOfTwo(dim)) throw ConfigError("feature dim must be a power of two");
  FeatureAccumulator acc(dim);
  AddField(title, &acc);
  AddField(body, &acc);
  return acc.Finish();
}

SparseVector Featurize(const Document& doc, uint32_t dim) {
  return Featurize(doc.working_title, doc.working_body, dim);
}

double Dot(const std::vector<double>& dense, const SparseVector& x) {
  double sum = 0.0;
  for (const auto& [index, value] : x) sum += dense[index] * value;
  return sum;
}

RelevanceModel RelevanceModel::Zero(uint32_t dim) {
  RelevanceModel m;
  m.dim = dim;
  m.seed = kFeatureHashSeed;
  m.weights.assign(dim, 0.0);
  return m;
}

void RelevanceModel::Validate() const {
  if (!IsPowerOfTwo(dim)) throw ConfigError("model dim must be a power of two");
  if (weights.size() != dim) throw ConfigError("model weight vector has wrong size");
  if (!std::isfinite(bias)) throw ConfigError("model bias is not finite");
  for (double w : weights) {
    if (!std::isfinite(w)) throw ConfigError("model weight is not finite");
  }
  if (!(t_low >= 0.0 && t_low < t_high && t_high <= 1.0)) {
    throw ConfigError("thresholds must satisfy 0 <= t_low < t_high <= 1");
  }
}

double RelevanceModel::Margin(const SparseVector& x) const {
  return Dot(weights, x) + bias;
}

void RelevanceModel::Save(const std::string& path) const {
  nlohmann::json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  j["dim"] = dim;
  j["seed"] = seed;
  j["bias"] = bias;
  j["t_low"] = t_low;
  j["t_high"] = t_high;
  auto& w = j["weights"] = nlohmann::json::array();
  for (uint32_t i = 0; i < weights.size(); ++i) {
    if (weights[i] != 0.0) w.push_back({i, weights[i]});
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write model: " + path);
  out << j.dump() << "\n";
}

RelevanceModel RelevanceModel::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open model: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed model file " + path + ": " + e.what());
  }
  if (j.value("format", "") != kModelFormat || j.value("version", 0) != kModelVersion) {
    throw ConfigError("unsupported model format in " + path);
  }
  RelevanceModel m;
  m.dim = j.at("dim").get<uint32_t>();
  m.seed = j.at("seed").get<uint64_t>();
  if (m.seed != kFeatureHashSeed) {
    throw ConfigError("model was built with a different feature hash seed");
  }
  m.bias = j.at("bias").get<double>();
  m.t_low = j.at("t_low").get<double>();
  m.t_high = j.at("t_high").get<double>();
  if (!IsPowerOfTwo(m.dim)) throw ConfigError("model dim must be a power of two");
  m.weights.assign(m.dim, 0.0);
  for (const auto& pair : j.at("weights")) {
    const auto index = pair.at(0).get<uint32_t>();
    if (index >= m.dim) throw ConfigError("model weight index out of range");
    m.weights[index] = pair.at(1).get<double>();
  }
  m.Validate();
  return m;
}

RelevanceModel TrainRelevance(const std::vector<LabeledDocument>& labeled,
                              const TrainOptions& options) {
  if (options.epochs < 1) throw InvalidInput("epochs must be >= 1");
  if (!(options.reg > 0.0)) throw InvalidInput("reg must be positive");
  if (!IsPowerOfTwo(options.dim)) throw InvalidInput("dim must be a power of two");
  bool has_pos = false;
  bool has_neg = false;
  for (const auto& l : labeled) (l.relevant ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg) {
    throw InvalidInput("training set must contain both labels");
  }

  std::vector<SparseVector> features;
  features.reserve(labeled.size());
  for (const auto& l : labeled) features.push_back(Featurize(*l.doc, options.dim));

  // w = scale * v; the bias is weight v_bias on a constant feature.
  std::vector<double> v(options.dim, 0.0);
  double v_bias = 0.0;
  double scale = 1.0;
  double v_norm_sq = 0.0;
  const double lambda = options.reg;
  const double radius_sq = 1.0 / lambda;

  std::mt19937_64 rng(options.seed);
  std::vector<size_t> order(labeled.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  uint64_t t = 0;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    for (size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[Bounded(rng, i)]);
    }
    for (size_t idx : order) {
      ++t;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      const double y = labeled[idx].relevant ? 1.0 : -1.0;
      const SparseVector& x = features[idx];
      const double margin = scale * (Dot(v, x) + v_bias);

      const double shrink = 1.0 - eta * lambda;
      if (shrink <= 0.0) {
        std::fill(v.begin(), v.end(), 0.0);
        v_bias = 0.0;
        v_norm_sq = 0.0;
        scale = 1.0;
      } else {
        scale *= shrink;
      }

      if (y * margin < 1.0) {
        const double step = eta * y / scale;
        for (const auto& [index, value] : x) {
          const double old = v[index];
          const double updated = old + step * value;
          v_norm_sq += updated * updated - old * old;
          v[index] = updated;
        }
        const double updated_bias = v_bias + step;
        v_norm_sq += updated_bias * updated_bias - v_bias * v_bias;
        v_bias = updated_bias;
      }

      const double norm_sq = scale * scale * v_norm_sq;
      if (norm_sq > radius_sq) scale *= std::sqrt(radius_sq / norm_sq);

      // Keep v in a sane range when the scale factor decays.
      if (scale < 1e-9) {
        for (auto& value : v) value *= scale;
        v_bias *= scale;
        v_norm_sq *= scale * scale;
        scale = 1.0;
      }
    }
  }

  RelevanceModel model;
  model.dim = options.dim;
  model.seed = kFeatureHashSeed;
  model.weights.resize(options.dim);
  for (uint32_t i = 0; i < options.dim; ++i) model.weights[i] = scale * v[i];
  model.bias = scale * v_bias;
  model.t_low = options.t_low;
  model.t_high = options.t_high;
  model.Validate();
  return model;
}

double ScoreRelevance(const SparseVector& x, const RelevanceModel& model) {
  return Logistic(model.Margin(x));
}

double ScoreRelevance(const Document& doc, const RelevanceModel& model) {
  return ScoreRelevance(Featurize(doc, model.dim), model);
}

Status Route(double score, double t_low, double t_high) {
  if (!(t_low >= 0.0 && t_low < t_high && t_high <= 1.0)) {
    throw ConfigError("thresholds must satisfy 0 <= t_low < t_high <= 1");
  }
  if (score >= t_high) return Status::kPublished;
  if (score < t_low) return Status::kSuppressed;
  return Status::kTriage;
}

}  // namespace epiwatch
