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

#include "epiwatch/util/time.h"

#include <array>
#include <cctype>
#include <cstdio>

namespace epiwatch {
namespace {

using namespace std::chrono;

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  bool done() const { return i_ >= s_.size(); }
  char peek() const { return done() ? '\0' : s_[i_]; }
  void skip() { ++i_; }
  void skip_spaces() {
    while (!done() && (s_[i_] == ' ' || s_[i_] == '\t' || s_[i_] == ','))
      ++i_;
  }
  bool eat(char c) {
    if (peek() != c) return false;
    ++i_;
    return true;
  }
  // Reads exactly n digits, or between 1 and n when `exact` is false.
  std::optional<int> digits(size_t n, bool exact = true) {
    size_t k = 0;
    int v = 0;
    while (k < n && !done() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
      v = v * 10 + (s_[i_] - '0');
      ++i_;
      ++k;
    }
    if (k == 0 || (exact && k != n)) return std::nullopt;
    return v;
  }
  std::string_view word() {
    const size_t b = i_;
    while (!done() && std::isalpha(static_cast<unsigned char>(s_[i_]))) ++i_;
    return s_.substr(b, i_ - b);
  }

 private:
  std::string_view s_;
  size_t i_ = 0;
};

std::optional<Date> MakeDate(int y, int m, int d) {
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return sys_days{ymd};
}

bool ValidClock(int h, int m, int s) {
  return h >= 0 && h <= 23 && m >= 0 && m <= 59 && s >= 0 && s <= 60;
}

// "Z", "+HH:MM", "+HHMM", "-HH". Returns the offset east of UTC in minutes.
std::optional<int> ParseNumericOffset(Cursor* c) {
  if (c->eat('Z') || c->eat('z')) return 0;
  const char sign = c->peek();
  if (sign != '+' && sign != '-') return std::nullopt;
  c->skip();
  auto hh = c->digits(2);
  if (!hh) return std::nullopt;
  int mm = 0;
  c->eat(':');
  if (auto m = c->digits(2)) mm = *m;
  const int total = *hh * 60 + mm;
  return sign == '-' ? -total : total;
}

std::optional<Timestamp> ParseIso(std::string_view text) {
  Cursor c(text);
  auto y = c.digits(4);
  if (!y || !c.eat('-')) return std::nullopt;
  auto mo = c.digits(2);
  if (!mo || !c.eat('-')) return std::nullopt;
  auto d = c.digits(2);
  if (!d) return std::nullopt;
  auto date = MakeDate(*y, *mo, *d);
  if (!date) return std::nullopt;
  if (c.done()) return Timestamp{*date};
  if (!c.eat('T') && !c.eat('t') && !c.eat(' ')) return std::nullopt;
  auto hh = c.digits(2);
  if (!hh || !c.eat(':')) return std::nullopt;
  auto mi = c.digits(2);
  if (!mi) return std::nullopt;
  int ss = 0;
  if (c.eat(':')) {
    auto s = c.digits(2);
    if (!s) return std::nullopt;
    ss = *s;
  }
  if (c.eat('.') || c.eat(',')) {
    while (std::isdigit(static_cast<unsigned char>(c.peek()))) c.skip();
  }
  if (!ValidClock(*hh, *mi, ss)) return std::nullopt;
  int offset = 0;
  if (!c.done()) {
    auto off = ParseNumericOffset(&c);
    if (!off || !c.done()) return std::nullopt;
    offset = *off;
  }
  return Timestamp{*date} + hours{*hh} + minutes{*mi} + seconds{ss} -
         minutes{offset};
}

constexpr std::array<std::string_view, 12> kMonths = {
    "jan", "feb", "mar", "apr", "may", "jun",
    "jul", "aug", "sep", "oct", "nov", "dec"};

struct Zone {
  std::string_view name;
  int offset_minutes;
};

constexpr Zone kZones[] = {
    {"ut", 0},          {"utc", 0},         {"gmt", 0},
    {"est", -5 * 60},   {"edt", -4 * 60},   {"cst", -6 * 60},
    {"cdt", -5 * 60},   {"mst", -7 * 60},   {"mdt", -6 * 60},
    {"pst", -8 * 60},   {"pdt", -7 * 60},
};

std::string Lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

// "Tue, 10 Jun 2003 04:00:00 GMT"; weekday and seconds optional.
std::optional<Timestamp> ParseRfc822(std::string_view text) {
  Cursor c(text);
  c.skip_spaces();
  if (std::isalpha(static_cast<unsigned char>(c.peek()))) {
    c.word();
    c.skip_spaces();
  }
  auto d = c.digits(2, false);
  if (!d) return std::nullopt;
  c.skip_spaces();
  const std::string mon = Lower(c.word()).substr(0, 3);
  int month_index = -1;
  for (size_t i = 0; i < kMonths.size(); ++i) {
    if (kMonths[i] == mon) month_index = static_cast<int>(i) + 1;
  }
  if (month_index < 0) return std::nullopt;
  c.skip_spaces();
  auto y = c.digits(4, false);
  if (!y) return std::nullopt;
  int year_value = *y < 100 ? *y + (*y < 50 ? 2000 : 1900) : *y;
  auto date = MakeDate(year_value, month_index, *d);
  if (!date) return std::nullopt;
  c.skip_spaces();
  if (c.done()) return Timestamp{*date};
  auto hh = c.digits(2, false);
  if (!hh || !c.eat(':')) return std::nullopt;
  auto mi = c.digits(2);
  if (!mi) return std::nullopt;
  int ss = 0;
  if (c.eat(':')) {
    auto s = c.digits(2);
    if (!s) return std::nullopt;
    ss = *s;
  }
  if (!ValidClock(*hh, *mi, ss)) return std::nullopt;
  c.skip_spaces();
  int offset = 0;
  if (!c.done()) {
    if (c.peek() == '+' || c.peek() == '-' || c.peek() == 'Z') {
      auto off = ParseNumericOffset(&c);
      if (!off) return std::nullopt;
      offset = *off;
    } else {
      const std::string zone = Lower(c.word());
      bool known = false;
      for (const auto& z : kZones) {
        if (z.name == zone) {
          offset = z.offset_minutes;
          known = true;
        }
      }
      if (!known) return std::nullopt;
    }
    c.skip_spaces();
    if (!c.done()) return std::nullopt;
  }
  return Timestamp{*date} + hours{*hh} + minutes{*mi} + seconds{ss} -
         minutes{offset};
}

std::string_view TrimView(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Timestamp Now() { return floor<seconds>(system_clock::now()); }

std::string FormatTimestamp(Timestamp t) {
  const Date d = floor<days>(t);
  const year_month_day ymd{d};
  const hh_mm_ss hms{t - d};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()),
                static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

std::string FormatDate(Date d) {
  const year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

std::optional<Timestamp> ParseTimestamp(std::string_view text) {
  text = TrimView(text);
  if (text.empty()) return std::nullopt;
  if (text.size() >= 10 && std::isdigit(static_cast<unsigned char>(text[0])) &&
      text[4] == '-') {
    return ParseIso(text);
  }
  return ParseRfc822(text);
}

std::optional<Date> ParseDate(std::string_view text) {
  text = TrimView(text);
  if (text.size() != 10) return std::nullopt;
  Cursor c(text);
  auto y = c.digits(4);
  if (!y || !c.eat('-')) return std::nullopt;
  auto m = c.digits(2);
  if (!m || !c.eat('-')) return std::nullopt;
  auto d = c.digits(2);
  if (!d || !c.done()) return std::nullopt;
  return MakeDate(*y, *m, *d);
}

}  // namespace epiwatch
