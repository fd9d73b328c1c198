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

#ifndef EPIWATCH_DEDUP_SKETCH_H_
#define EPIWATCH_DEDUP_SKETCH_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace epiwatch {

inline constexpr size_t kDefaultSketchSize = 64;
inline constexpr int kDefaultShingleWidth = 3;

// Distinct hashes of every window of `width` consecutive lowercased tokens,
// sorted ascending. Fewer than `width` tokens gives an empty set.
// Throws InvalidInput unless width is 3 or 4.
std::vector<uint64_t> Shingle(const std::vector<std::string>& lower_tokens,
                              int width = kDefaultShingleWidth);

struct BottomKSketch {
  size_t k = kDefaultSketchSize;
  // The k smallest shingle hashes, strictly increasing.
  std::vector<uint64_t> hashes;

  bool operator==(const BottomKSketch&) const = default;
};

// `shingles` need not be sorted or distinct.
BottomKSketch Sketch(std::span<const uint64_t> shingles, size_t k = kDefaultSketchSize);

// Bottom-k of the union of two sketches of the same k.
BottomKSketch MergeSketches(const BottomKSketch& a, const BottomKSketch& b);

// |M ∩ A ∩ B| / |M| with M the k smallest of A ∪ B. Two empty sketches are
// treated as duplicates (1.0). Throws InvalidInput when k differs.
double EstimateJaccard(const BottomKSketch& a, const BottomKSketch& b);

// Shared distinct word triplets over the smaller triplet count, so a short
// wire story embedded in a longer article still scores high.
double TripletOverlap(const std::vector<std::string>& tokens_a,
                      const std::vector<std::string>& tokens_b);
// Same, over precomputed sorted triplet hash sets.
double TripletOverlap(std::span<const uint64_t> triplets_a,
                      std::span<const uint64_t> triplets_b);

}  // namespace epiwatch

#endif  // EPIWATCH_DEDUP_SKETCH_H_
