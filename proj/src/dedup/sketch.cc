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

#include "epiwatch/dedup/sketch.h"

#include <algorithm>

#include "epiwatch/util/error.h"
#include "epiwatch/util/hash.h"

namespace epiwatch {

std::vector<uint64_t> Shingle(const std::vector<std::string>& lower_tokens,
                              int width) {
  if (width != 3 && width != 4) throw InvalidInput("shingle width must be 3 or 4");
  std::vector<uint64_t> out;
  const auto w = static_cast<size_t>(width);
  if (lower_tokens.size() < w) return out;
  out.reserve(lower_tokens.size() - w + 1);
  std::string window;
  for (size_t i = 0; i + w <= lower_tokens.size(); ++i) {
    window.clear();
    for (size_t j = 0; j < w; ++j) {
      if (j > 0) window.push_back(' ');
      window += lower_tokens[i + j];
    }
    out.push_back(Hash64(window, kShingleHashSeed));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

BottomKSketch Sketch(std::span<const uint64_t> shingles, size_t k) {
  if (k < 1) throw InvalidInput("sketch size must be >= 1");
  std::vector<uint64_t> values(shingles.begin(), shingles.end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (values.size() > k) values.resize(k);
  return {k, std::move(values)};
}

BottomKSketch MergeSketches(const BottomKSketch& a, const BottomKSketch& b) {
  if (a.k != b.k) throw InvalidInput("sketch sizes differ");
  std::vector<uint64_t> merged;
  std::set_union(a.hashes.begin(), a.hashes.end(), b.hashes.begin(), b.hashes.end(),
                 std::back_inserter(merged));
  if (merged.size() > a.k) merged.resize(a.k);
  return {a.k, std::move(merged)};
}

double EstimateJaccard(const BottomKSketch& a, const BottomKSketch& b) {
  if (a.k != b.k) throw InvalidInput("sketch sizes differ");
  if (a.hashes.empty() && b.hashes.empty()) return 1.0;
  // Walk the merged order; M is the first k distinct values.
  size_t i = 0;
  size_t j = 0;
  size_t taken = 0;
  size_t shared = 0;
  while (taken < a.k && (i < a.hashes.size() || j < b.hashes.size())) {
    if (j >= b.hashes.size() || (i < a.hashes.size() && a.hashes[i] < b.hashes[j])) {
      ++i;
    } else if (i >= a.hashes.size() || b.hashes[j] < a.hashes[i]) {
      ++j;
    } else {
      ++shared;
      ++i;
      ++j;
    }
    ++taken;
  }
  return static_cast<double>(shared) / static_cast<double>(taken);
}

double TripletOverlap(std::span<const uint64_t> triplets_a,
                      std::span<const uint64_t> triplets_b) {
  size_t i = 0;
  size_t j = 0;
  size_t shared = 0;
  while (i < triplets_a.size() && j < triplets_b.size()) {
    if (triplets_a[i] < triplets_b[j]) {
      ++i;
    } else if (triplets_b[j] < triplets_a[i]) {
      ++j;
    } else {
      ++shared;
      ++i;
      ++j;
    }
  }
  const size_t denom = std::max<size_t>(1, std::min(triplets_a.size(), triplets_b.size()));
  return static_cast<double>(shared) / static_cast<double>(denom);
}

double TripletOverlap(const std::vector<std::string>& tokens_a,
                      const std::vector<std::string>& tokens_b) {
  const auto a = Shingle(tokens_a, 3);
  const auto b = Shingle(tokens_b, 3);
  return TripletOverlap(a, b);
}

}  // namespace epiwatch
