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

#ifndef EPIWATCH_UTIL_ERROR_H_
#define EPIWATCH_UTIL_ERROR_H_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace epiwatch {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller passed something that violates an operation's precondition.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Bad thresholds, missing files named in configuration and the like.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Network or filesystem failure while fetching a feed. Safe to retry.
class FetchError : public Error {
 public:
  using Error::Error;
};

class TranslationError : public Error {
 public:
  using Error::Error;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

// State-transition conflict, e.g. a triage decision on a decided document.
class Conflict : public Error {
 public:
  using Error::Error;
};

// Request validation failure. Carries every offending item so callers can
// report them all at once.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> offenders)
      : Error(Join(offenders)), offenders_(std::move(offenders)) {}

  const std::vector<std::string>& offenders() const { return offenders_; }

 private:
  static std::string Join(const std::vector<std::string>& items) {
    std::string out = "validation failed:";
    for (const auto& item : items) out += " " + item + ";";
    return out;
  }

  std::vector<std::string> offenders_;
};

}  // namespace epiwatch

#endif  // EPIWATCH_UTIL_ERROR_H_
