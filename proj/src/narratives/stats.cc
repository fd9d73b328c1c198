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

#include "epiwatch/narratives/stats.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "epiwatch/util/error.h"

namespace epiwatch {
namespace {

// Stirling-series remainder ln(n!) - [(n + 1/2) ln n - n + ln sqrt(2 pi)].
double StirlingError(double n) {
  constexpr double kS0 = 1.0 / 12, kS1 = 1.0 / 360, kS2 = 1.0 / 1260, kS3 = 1.0 / 1680,
                   kS4 = 1.0 / 1188;
  if (n <= 15.0) {
    return std::lgamma(n + 1.0) - (n + 0.5) * std::log(n) + n - 0.5 * std::log(2 * M_PI);
  }
  const double nn = n * n;
  if (n > 500) return (kS0 - kS1 / nn) / n;
  if (n > 80) return (kS0 - (kS1 - kS2 / nn) / nn) / n;
  if (n > 35) return (kS0 - (kS1 - (kS2 - kS3 / nn) / nn) / nn) / n;
  return (kS0 - (kS1 - (kS2 - (kS3 - kS4 / nn) / nn) / nn) / nn) / n;
}

// Deviance term x ln(x / m) + m - x, summed as a series when x is near m
// to avoid cancellation.
double Deviance(double x, double m) {
  if (std::abs(x - m) < 0.1 * (x + m)) {
    double v = (x - m) / (x + m);
    double s = (x - m) * v;
    double ej = 2 * x * v;
    v *= v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
    return s;
  }
  return x * std::log(x / m) + m - x;
}

// Saddle-point form of the Poisson pmf, accurate to a few ulps even when
// k and rate are large (a plain lgamma form loses ~1e-11 near k = 1e4).
double Pmf(uint64_t k, double rate) {
  if (k == 0) return std::exp(-rate);
  const double kd = static_cast<double>(k);
  return std::exp(-StirlingError(kd) - Deviance(kd, rate)) / std::sqrt(2 * M_PI * kd);
}

}  // namespace

double PoissonTail(uint64_t c, double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw InvalidInput("poisson rate must be positive and finite");
  }
  if (c == 0) return 1.0;
  const double cd = static_cast<double>(c);
  if (cd > rate) {
    // Terms decrease from k = c onward; stop once they no longer register.
    double term = Pmf(c, rate);
    double sum = 0.0;
    for (uint64_t k = c; term > 0.0; ++k) {
      sum += term;
      if (term < sum * 1e-17) break;
      term *= rate / static_cast<double>(k + 1);
    }
    return std::min(sum, 1.0);
  }
  // Lower tail P(X <= c - 1), summed downward from its largest term.
  double term = Pmf(c - 1, rate);
  double sum = 0.0;
  for (uint64_t k = c - 1;; --k) {
    sum += term;
    if (k == 0 || term < sum * 1e-17) break;
    term *= static_cast<double>(k) / rate;
  }
  return std::clamp(1.0 - sum, 0.0, 1.0);
}

double JensenShannon(const TermCounts& p, const TermCounts& q) {
  std::set<std::string> vocab;
  int64_t total_p = 0;
  int64_t total_q = 0;
  for (const auto& [t, n] : p) {
    vocab.insert(t);
    total_p += n;
  }
  for (const auto& [t, n] : q) {
    vocab.insert(t);
    total_q += n;
  }
  if (vocab.empty()) return 0.0;
  const double v = static_cast<double>(vocab.size());
  const double zp = static_cast<double>(total_p) + v;
  const double zq = static_cast<double>(total_q) + v;
  double js = 0.0;
  for (const auto& t : vocab) {
    auto ip = p.find(t);
    auto iq = q.find(t);
    const double pi = (static_cast<double>(ip == p.end() ? 0 : ip->second) + 1.0) / zp;
    const double qi = (static_cast<double>(iq == q.end() ? 0 : iq->second) + 1.0) / zq;
    const double mi = 0.5 * (pi + qi);
    js += 0.5 * pi * std::log2(pi / mi) + 0.5 * qi * std::log2(qi / mi);
  }
  return std::clamp(js, 0.0, 1.0);
}

}  // namespace epiwatch
