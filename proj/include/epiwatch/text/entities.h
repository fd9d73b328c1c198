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

#ifndef EPIWATCH_TEXT_ENTITIES_H_
#define EPIWATCH_TEXT_ENTITIES_H_

#include <string>
#include <vector>

#include "epiwatch/ingest/document.h"
#include "epiwatch/text/phrase_matcher.h"

namespace epiwatch {

// Job-title phrases ("chief epidemiologist", "health minister").
class TitleLexicon {
 public:
  static TitleLexicon Load(const std::string& path);
  void Add(const std::string& phrase);
  const PhraseMatcher& matcher() const { return matcher_; }

 private:
  PhraseMatcher matcher_;
};

// Heuristic person and organization tagger over working text.
//
// Persons: a capitalized run after an honorific (Dr., Mr., Prof., ...), or a
// run of two or more capitalized tokens followed by ", <job title>".
// Organizations: a capitalized run containing a cue word (Ministry, Agency,
// ...) or followed by a parenthesized acronym. An all-caps token later in
// the document that equals a known organization's initials or a defined
// acronym is reported under the organization's full name.
std::vector<EntityMention> TagEntities(const Document& doc,
                                       const TitleLexicon& titles);

}  // namespace epiwatch

#endif  // EPIWATCH_TEXT_ENTITIES_H_
