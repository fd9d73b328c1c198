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

#ifndef EPIWATCH_NARRATIVES_STATS_H_
#define EPIWATCH_NARRATIVES_STATS_H_

#include <cstdint>
#include <map>
#include <string>

namespace epiwatch {

// P(X >= c) for X ~ Poisson(rate). Sums the upper tail directly when c is
// above the mean and the complementary lower tail otherwise, so neither
// branch subtracts nearly equal quantities. Throws InvalidInput when
// rate <= 0.
double PoissonTail(uint64_t c, double rate);

using TermCounts = std::map<std::string, int64_t>;

// Base-2 Jensen-Shannon divergence of two term distributions after add-one
// smoothing over the union vocabulary. In [0, 1]; 0 for two empty inputs.
double JensenShannon(const TermCounts& p, const TermCounts& q);

}  // namespace epiwatch

#endif  // EPIWATCH_NARRATIVES_STATS_H_
