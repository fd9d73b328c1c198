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

#include "epiwatch/ingest/document.h"

#include <algorithm>

#include "epiwatch/util/error.h"

namespace epiwatch {

std::string_view ToString(Field f) { return f == Field::kTitle ? "title" : "body"; }

Field ParseField(std::string_view s) {
  if (s == "title") return Field::kTitle;
  if (s == "body") return Field::kBody;
  throw InvalidInput("unknown field: " + std::string(s));
}

std::string_view ToString(Status s) {
  switch (s) {
    case Status::kPending: return "pending";
    case Status::kPublished: return "published";
    case Status::kTriage: return "triage";
    case Status::kSuppressed: return "suppressed";
  }
  return "pending";
}

Status ParseStatus(std::string_view s) {
  if (s == "pending") return Status::kPending;
  if (s == "published") return Status::kPublished;
  if (s == "triage") return Status::kTriage;
  if (s == "suppressed") return Status::kSuppressed;
  throw InvalidInput("unknown status: " + std::string(s));
}

bool IsValidTransition(Status from, Status to) {
  if (from == Status::kPending) return to != Status::kPending;
  if (from == Status::kTriage)
    return to == Status::kPublished || to == Status::kSuppressed;
  return false;
}

std::string_view ToString(ResolveMethod m) {
  switch (m) {
    case ResolveMethod::kUnique: return "unique";
    case ResolveMethod::kPublisherCountry: return "publisher_country";
    case ResolveMethod::kPopulation: return "population";
    case ResolveMethod::kUnresolved: return "unresolved";
  }
  return "unresolved";
}

ResolveMethod ParseResolveMethod(std::string_view s) {
  if (s == "unique") return ResolveMethod::kUnique;
  if (s == "publisher_country") return ResolveMethod::kPublisherCountry;
  if (s == "population") return ResolveMethod::kPopulation;
  if (s == "unresolved") return ResolveMethod::kUnresolved;
  throw InvalidInput("unknown resolve method: " + std::string(s));
}

std::string_view ToString(CountCategory c) {
  switch (c) {
    case CountCategory::kDeaths: return "deaths";
    case CountCategory::kCases: return "cases";
    case CountCategory::kHospitalized: return "hospitalized";
  }
  return "deaths";
}

CountCategory ParseCountCategory(std::string_view s) {
  if (s == "deaths") return CountCategory::kDeaths;
  if (s == "cases") return CountCategory::kCases;
  if (s == "hospitalized") return CountCategory::kHospitalized;
  throw InvalidInput("unknown count category: " + std::string(s));
}

bool Document::HasFlag(std::string_view flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

void Document::AddFlag(std::string_view flag) {
  if (!HasFlag(flag)) flags.emplace_back(flag);
}

void Document::TransitionTo(Status next) {
  if (!IsValidTransition(status, next)) {
    throw Conflict("document " + doc_id + " cannot move from " +
                   std::string(ToString(status)) + " to " +
                   std::string(ToString(next)));
  }
  status = next;
}

}  // namespace epiwatch
