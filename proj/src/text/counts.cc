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

#include "epiwatch/text/counts.h"

#include <array>
#include <optional>
#include <string>

#include "epiwatch/text/tokenize.h"

namespace epiwatch {
namespace {

bool AllDigits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

struct ParsedInteger {
  uint64_t value = 0;
  size_t first = 0;
  size_t last = 0;  // inclusive token index
};

class CountScanner {
 public:
  CountScanner(std::string_view text, Field field)
      : text_(text), field_(field), tokens_(Tokenize(text)) {}

  std::vector<CasualtyCount> Run() {
    std::vector<CasualtyCount> out;
    size_t i = 0;
    while (i < tokens_.size()) {
      if (auto n = IntegerAt(i)) {
        const size_t next = n->last + 1;
        if (next < tokens_.size() && SpaceBetween(n->last)) {
          if (auto cat = NounCategory(tokens_[next].lower)) {
            out.push_back({*cat, n->value,
                           {tokens_[n->first].span.begin, tokens_[next].span.end},
                           field_});
            i = next + 1;
            continue;
          }
        }
        i = n->last + 1;
        continue;
      }
      if (auto match = TollAt(i)) {
        out.push_back(match->first);
        i = match->second;
        continue;
      }
      ++i;
    }
    return out;
  }

 private:
  bool SpaceBetween(size_t i) const {
    const size_t b = tokens_[i].span.end;
    const size_t e = tokens_[i + 1].span.begin;
    return e > b && IsWhitespaceGap(text_.substr(b, e - b));
  }

  // Digit run, or 1-3 digits followed by ",ddd" groups.
  std::optional<ParsedInteger> IntegerAt(size_t i) const {
    const Token& t = tokens_[i];
    if (!AllDigits(t.text)) return std::nullopt;
    // Reject digit tokens glued to a preceding comma group ("1,2,3") or
    // decimal point.
    if (t.span.begin > 0) {
      const char before = text_[t.span.begin - 1];
      if ((before == ',' || before == '.') && t.span.begin >= 2 &&
          text_[t.span.begin - 2] >= '0' && text_[t.span.begin - 2] <= '9') {
        return std::nullopt;
      }
    }
    ParsedInteger p;
    p.first = p.last = i;
    std::string digits = t.text;
    if (t.text.size() <= 3) {
      size_t k = i;
      while (k + 1 < tokens_.size() && tokens_[k].span.end + 1 == tokens_[k + 1].span.begin &&
             text_[tokens_[k].span.end] == ',' && tokens_[k + 1].text.size() == 3 &&
             AllDigits(tokens_[k + 1].text)) {
        ++k;
        digits += tokens_[k].text;
      }
      p.last = k;
    }
    // A trailing decimal part means this is not a count.
    const size_t end = tokens_[p.last].span.end;
    if (end + 1 < text_.size() && text_[end] == '.' && text_[end + 1] >= '0' &&
        text_[end + 1] <= '9') {
      return std::nullopt;
    }
    if (digits.size() > 19) return std::nullopt;
    p.value = std::stoull(digits);
    return p;
  }

  static std::optional<CountCategory> NounCategory(std::string_view w) {
    if (w == "deaths" || w == "dead") return CountCategory::kDeaths;
    if (w == "cases" || w == "infections") return CountCategory::kCases;
    if (w == "hospitalized" || w == "hospitalised") return CountCategory::kHospitalized;
    return std::nullopt;
  }

  static bool IsRiseVerb(std::string_view w) {
    return w == "rises" || w == "rose" || w == "climbs" || w == "climbed";
  }

  // "death toll rose to N" starting at token i; returns the count and the
  // index after it.
  std::optional<std::pair<CasualtyCount, size_t>> TollAt(size_t i) const {
    if (i + 4 >= tokens_.size()) return std::nullopt;
    const auto& a = tokens_[i].lower;
    const auto& b = tokens_[i + 1].lower;
    CountCategory cat;
    if (a == "death" && b == "toll") {
      cat = CountCategory::kDeaths;
    } else if (a == "case" && b == "count") {
      cat = CountCategory::kCases;
    } else {
      return std::nullopt;
    }
    if (!IsRiseVerb(tokens_[i + 2].lower) || tokens_[i + 3].lower != "to")
      return std::nullopt;
    for (size_t k = i; k < i + 4; ++k) {
      if (!SpaceBetween(k)) return std::nullopt;
    }
    auto n = IntegerAt(i + 4);
    if (!n) return std::nullopt;
    CasualtyCount c{cat, n->value,
                    {tokens_[i].span.begin, tokens_[n->last].span.end}, field_};
    return std::make_pair(c, n->last + 1);
  }

  std::string_view text_;
  Field field_;
  std::vector<Token> tokens_;
};

}  // namespace

std::vector<CasualtyCount> ExtractCounts(std::string_view text, Field field) {
  return CountScanner(text, field).Run();
}

std::vector<CasualtyCount> ExtractCounts(const Document& doc) {
  auto counts = ExtractCounts(doc.working_title, Field::kTitle);
  auto body = ExtractCounts(doc.working_body, Field::kBody);
  counts.insert(counts.end(), body.begin(), body.end());
  return counts;
}

}  // namespace epiwatch
