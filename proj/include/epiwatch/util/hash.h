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

#ifndef EPIWATCH_UTIL_HASH_H_
#define EPIWATCH_UTIL_HASH_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace epiwatch {

// Published seeds. Changing any of these invalidates persisted models,
// document ids and sketches.
inline constexpr uint64_t kFeatureHashSeed = 0x5EED0F3A7E15ULL;
inline constexpr uint64_t kShingleHashSeed = 0x5EED5419C1E5ULL;
inline constexpr uint64_t kContentHashSeedHi = 0xC0DE0001ULL;
inline constexpr uint64_t kContentHashSeedLo = 0xC0DE0002ULL;
inline constexpr uint64_t kSeenHashSeed = 0x5EE115E7ULL;

// XXH64. Byte-order independent, so hashes are stable across platforms.
uint64_t Hash64(std::string_view data, uint64_t seed = 0);

// 128-bit content hash rendered as 32 lowercase hex digits.
std::string ContentHash128(std::string_view data);

std::string ToHex(uint64_t value);

}  // namespace epiwatch

#endif  // EPIWATCH_UTIL_HASH_H_
