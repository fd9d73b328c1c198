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

#include "epiwatch/text/entities.h"

#include <array>
#include <fstream>
#include <map>
#include <string_view>

#include "epiwatch/util/error.h"
#include "epiwatch/util/text.h"

namespace epiwatch {

TitleLexicon TitleLexicon::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open job titles: " + path);
  TitleLexicon titles;
  std::string line;
  while (std::getline(in, line)) {
    auto phrase = Trim(line);
    if (phrase.empty() || phrase[0] == '#') continue;
    titles.Add(std::string(phrase));
  }
  return titles;
}

void TitleLexicon::Add(const std::string& phrase) { matcher_.Add(phrase, 0); }

namespace {

constexpr std::array<std::string_view, 10> kHonorifics = {
    "Dr", "Mr", "Mrs", "Ms", "Prof", "Professor", "Sir", "Dame", "Mme", "Mx"};

constexpr std::array<std::string_view, 9> kOrgCues = {
    "Ministry", "Organization", "Organisation", "Agency",  "Institute",
    "University", "Hospital", "Department", "Centre"};

// Lowercase words allowed inside a capitalized run.
constexpr std::array<std::string_view, 6> kConnectors = {"of", "for", "and",
                                                         "the", "on", "de"};

// Capitalized sentence openers that never start a name.
constexpr std::array<std::string_view, 15> kLeadingFunctionWords = {
    "The", "A", "An", "In", "On", "At", "By", "For", "From", "According",
    "But", "And", "Yesterday", "Today", "Meanwhile"};

template <size_t N>
bool Contains(const std::array<std::string_view, N>& set, std::string_view w) {
  for (auto s : set) {
    if (s == w) return true;
  }
  return false;
}

bool StartsUpper(const Token& t) {
  size_t pos = 0;
  return IsUpper(NextCodepoint(t.text, &pos));
}

bool IsAcronym(const Token& t) {
  if (t.text.size() < 2) return false;
  int letters = 0;
  for (char c : t.text) {
    if (c >= 'A' && c <= 'Z') {
      ++letters;
    } else if (!(c >= '0' && c <= '9')) {
      return false;
    }
  }
  return letters >= 2;
}

class FieldTagger {
 public:
  FieldTagger(const std::string& text, Field field, const TitleLexicon& titles,
              std::map<std::string, std::string>* acronyms,
              std::vector<EntityMention>* out)
      : text_(text),
        field_(field),
        titles_(titles),
        acronyms_(acronyms),
        out_(out),
        tokens_(Tokenize(text)) {}

  void Run() {
    size_t i = 0;
    while (i < tokens_.size()) {
      const Token& t = tokens_[i];
      if (IsAcronym(t) && acronyms_->contains(t.text) && !InRunWithNext(i)) {
        Emit(EntityKind::kOrganization, acronyms_->at(t.text), std::nullopt,
             t.span);
        ++i;
        continue;
      }
      if (Contains(kHonorifics, t.text) && i + 1 < tokens_.size() &&
          HonorificGap(i)) {
        const size_t end = RunEnd(i + 1);
        if (end > i + 1 && !HasCue(i + 1, end)) {
          const size_t after = EmitPerson(i + 1, end);
          i = after;
          continue;
        }
      }
      if (!StartsUpper(t)) {
        ++i;
        continue;
      }
      size_t begin = i;
      size_t end = RunEnd(i);
      while (begin < end && Contains(kLeadingFunctionWords, tokens_[begin].text))
        ++begin;
      if (begin == end) {
        i = end;
        continue;
      }
      const auto acronym = ParenthesizedAcronym(end);
      if (HasCue(begin, end) || acronym) {
        const std::string name = Join(begin, end);
        Emit(EntityKind::kOrganization, name, std::nullopt,
             {tokens_[begin].span.begin, tokens_[end - 1].span.end});
        acronyms_->emplace(Initials(begin, end), name);
        if (acronym) {
          acronyms_->emplace(tokens_[end].text, name);
          i = end + 1;
        } else {
          i = end;
        }
        continue;
      }
      if (end - begin >= 2 && Gap(end - 1).starts_with(",")) {
        PhraseMatcher::Match m;
        if (end < tokens_.size() &&
            IsWhitespaceGap(Gap(end - 1).substr(1)) &&
            titles_.matcher().MatchAt(tokens_, end, &m)) {
          const size_t last = end + m.token_count - 1;
          const Span title_span{tokens_[end].span.begin, tokens_[last].span.end};
          Emit(EntityKind::kPerson, Join(begin, end),
               text_.substr(title_span.begin, title_span.size()),
               {tokens_[begin].span.begin, tokens_[end - 1].span.end});
          i = last + 1;
          continue;
        }
      }
      i = end;
    }
  }

 private:
  // Text between token i and token i + 1.
  std::string_view Gap(size_t i) const {
    const size_t b = tokens_[i].span.end;
    const size_t e =
        i + 1 < tokens_.size() ? tokens_[i + 1].span.begin : text_.size();
    return std::string_view(text_).substr(b, e - b);
  }

  bool JoinableGap(size_t i) const {
    const auto gap = Gap(i);
    return gap == " " || gap == "-" || gap == "'" || gap == "’" ||
           (!gap.empty() && IsWhitespaceGap(gap));
  }

  bool HonorificGap(size_t i) const {
    auto gap = Gap(i);
    if (gap.starts_with(".")) gap.remove_prefix(1);
    return !gap.empty() && IsWhitespaceGap(gap);
  }

  bool InRunWithNext(size_t i) const {
    return i + 1 < tokens_.size() && JoinableGap(i) && StartsUpper(tokens_[i + 1]) &&
           !IsAcronym(tokens_[i + 1]);
  }

  // One past the last token of the capitalized run starting at `i`.
  size_t RunEnd(size_t i) const {
    if (!StartsUpper(tokens_[i])) return i;
    size_t end = i + 1;
    while (end < tokens_.size() && JoinableGap(end - 1)) {
      const Token& next = tokens_[end];
      if (Contains(kHonorifics, next.text)) break;
      if (StartsUpper(next)) {
        ++end;
        continue;
      }
      if (Contains(kConnectors, next.text) && end + 1 < tokens_.size() &&
          JoinableGap(end) && StartsUpper(tokens_[end + 1])) {
        end += 2;
        continue;
      }
      break;
    }
    return end;
  }

  bool HasCue(size_t begin, size_t end) const {
    for (size_t k = begin; k < end; ++k) {
      if (Contains(kOrgCues, tokens_[k].text)) return true;
    }
    return false;
  }

  // Token index of ACRONYM in "<run> (ACRONYM)".
  std::optional<size_t> ParenthesizedAcronym(size_t end) const {
    if (end == 0 || end >= tokens_.size()) return std::nullopt;
    if (Trim(Gap(end - 1)) != "(") return std::nullopt;
    if (!IsAcronym(tokens_[end])) return std::nullopt;
    if (!Gap(end).starts_with(")")) return std::nullopt;
    return end;
  }

  std::string Join(size_t begin, size_t end) const {
    return text_.substr(tokens_[begin].span.begin,
                        tokens_[end - 1].span.end - tokens_[begin].span.begin);
  }

  std::string Initials(size_t begin, size_t end) const {
    std::string initials;
    for (size_t k = begin; k < end; ++k) {
      const Token& t = tokens_[k];
      if (!StartsUpper(t)) continue;
      const char c = t.text[0];
      if (c >= 'A' && c <= 'Z') initials.push_back(c);
    }
    return initials;
  }

  size_t EmitPerson(size_t begin, size_t end) {
    std::optional<std::string> title;
    size_t after = end;
    if (end < tokens_.size() && Gap(end - 1).starts_with(",") &&
        IsWhitespaceGap(Gap(end - 1).substr(1))) {
      PhraseMatcher::Match m;
      if (titles_.matcher().MatchAt(tokens_, end, &m)) {
        const size_t last = end + m.token_count - 1;
        title = text_.substr(tokens_[end].span.begin,
                             tokens_[last].span.end - tokens_[end].span.begin);
        after = last + 1;
      }
    }
    Emit(EntityKind::kPerson, Join(begin, end), title,
         {tokens_[begin].span.begin, tokens_[end - 1].span.end});
    return after;
  }

  void Emit(EntityKind kind, std::string name, std::optional<std::string> title,
            Span span) {
    EntityMention m;
    m.kind = kind;
    m.name = std::move(name);
    m.title_phrase = std::move(title);
    m.span = span;
    m.field = field_;
    out_->push_back(std::move(m));
  }

  const std::string& text_;
  Field field_;
  const TitleLexicon& titles_;
  std::map<std::string, std::string>* acronyms_;
  std::vector<EntityMention>* out_;
  std::vector<Token> tokens_;
};

}  // namespace

std::vector<EntityMention> TagEntities(const Document& doc,
                                       const TitleLexicon& titles) {
  std::vector<EntityMention> mentions;
  std::map<std::string, std::string> acronyms;
  FieldTagger(doc.working_title, Field::kTitle, titles, &acronyms, &mentions).Run();
  FieldTagger(doc.working_body, Field::kBody, titles, &acronyms, &mentions).Run();
  return mentions;
}

}  // namespace epiwatch
