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

#ifndef EPIWATCH_INGEST_TRANSLATION_H_
#define EPIWATCH_INGEST_TRANSLATION_H_

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "epiwatch/ingest/document.h"
#include "epiwatch/ingest/language.h"

namespace epiwatch {

// Language detection plus machine translation, normally a remote service.
// Implementations throw TranslationError on failure.
class TranslationClient {
 public:
  virtual ~TranslationClient() = default;
  virtual std::string Detect(std::string_view text) = 0;
  virtual std::string Translate(std::string_view text, std::string_view src,
                                std::string_view dst) = 0;
};

// Offline client. Translation is the identity for src == dst and a
// case-insensitive whole-word glossary substitution otherwise (longest
// phrase first); untranslated words pass through. Detection delegates to a
// trigram detector when one is supplied.
class StubTranslationClient : public TranslationClient {
 public:
  explicit StubTranslationClient(const LanguageDetector* detector = nullptr)
      : detector_(detector) {}

  // TSV: src_lang, source_phrase, english_phrase.
  static StubTranslationClient FromGlossary(const std::string& path,
                                            const LanguageDetector* detector = nullptr);

  void AddGlossaryEntry(const std::string& src_lang, const std::string& phrase,
                        const std::string& english);

  std::string Detect(std::string_view text) override;
  std::string Translate(std::string_view text, std::string_view src,
                        std::string_view dst) override;

 private:
  const LanguageDetector* detector_;
  // src_lang -> (lowercased source phrase, english), longest phrase first.
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> glossary_;
};

// JSON over HTTP:
//   POST <base>/detect     {"text": ...}                      -> {"lang": ...}
//   POST <base>/translate  {"text": ..., "from": ..., "to": ...} -> {"text": ...}
class HttpTranslationClient : public TranslationClient {
 public:
  HttpTranslationClient(std::string base_url, double timeout_seconds = 10.0);
  ~HttpTranslationClient() override;

  std::string Detect(std::string_view text) override;
  std::string Translate(std::string_view text, std::string_view src,
                        std::string_view dst) override;

 private:
  std::string Post(const std::string& path, const std::string& body,
                   const std::string& field);
  std::string base_url_;
  std::string prefix_;
  double timeout_seconds_;
};

struct WorkingText {
  std::string title;
  std::string body;
  bool translation_pending = false;
};

// English text for analytics. English (and undetermined) articles keep
// their original text; otherwise the client's translation is used, falling
// back to the original with translation_pending set when the client fails.
WorkingText TranslateToWorking(const RawArticle& article, std::string_view lang,
                               TranslationClient& client);

}  // namespace epiwatch

#endif  // EPIWATCH_INGEST_TRANSLATION_H_
