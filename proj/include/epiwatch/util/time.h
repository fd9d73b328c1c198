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

#ifndef EPIWATCH_UTIL_TIME_H_
#define EPIWATCH_UTIL_TIME_H_

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace epiwatch {

using Timestamp = std::chrono::sys_seconds;
using Date = std::chrono::sys_days;

Timestamp Now();

// "YYYY-MM-DDTHH:MM:SSZ".
std::string FormatTimestamp(Timestamp t);
// "YYYY-MM-DD".
std::string FormatDate(Date d);

// Accepts ISO 8601 (date, date-time with optional fraction and offset) and
// RFC 822 dates as found in RSS. Values without a zone are taken as UTC.
std::optional<Timestamp> ParseTimestamp(std::string_view text);
std::optional<Date> ParseDate(std::string_view text);

inline Date DateOf(Timestamp t) { return std::chrono::floor<std::chrono::days>(t); }

}  // namespace epiwatch

#endif  // EPIWATCH_UTIL_TIME_H_
