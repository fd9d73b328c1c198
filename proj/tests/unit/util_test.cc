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

#include <doctest.h>

#include "epiwatch/util/hash.h"
#include "epiwatch/util/text.h"
#include "epiwatch/util/time.h"

using namespace epiwatch;

// Reference values from the xxHash reference implementation.
TEST_CASE("xxh64 reference vectors") {
  CHECK(Hash64("", 0) == 0xef46db3751d8e999ULL);
  CHECK(Hash64("a", 0) == 0xd24ec4f1a98c6e5bULL);
  CHECK(Hash64("abc", 0) == 0x44bc2cf5ad770999ULL);
  CHECK(Hash64("Nobody inspects the spammish repetition", 0) == 0xfbcea83c8a378bf1ULL);
  CHECK(Hash64("", 0x9E3779B97F4A7C15ULL) == 0xc4349fc93c010000ULL);
  CHECK(Hash64("a", 0x9E3779B97F4A7C15ULL) == 0x9a7c6d2ea45568c9ULL);
  CHECK(Hash64("abc", 0x9E3779B97F4A7C15ULL) == 0x2ed0f59d6b43ac8bULL);
}

TEST_CASE("xxh64 handles every tail length") {
  // Inputs crossing the 32-byte stripe boundary exercise all code paths;
  // the hash must differ from its neighbours and be stable.
  std::string s;
  uint64_t prev = Hash64(s);
  for (int i = 0; i < 80; ++i) {
    s.push_back(static_cast<char>('a' + i % 26));
    uint64_t h = Hash64(s);
    CHECK(h != prev);
    CHECK(h == Hash64(std::string(s)));
    prev = h;
  }
}

TEST_CASE("content hash is two seeded halves") {
  CHECK(ContentHash128("Measles alert\n") == "f3aa946547ec92855b51ada9088f6e02");
  CHECK(ContentHash128("a\nb") == "f979e699cec4fe3e4de3dc094770c248");
  const std::string h = ContentHash128("xyz");
  CHECK(h == ToHex(Hash64("xyz", kContentHashSeedHi)) + ToHex(Hash64("xyz", kContentHashSeedLo)));
  CHECK(ToHex(0x1) == "0000000000000001");
}

TEST_CASE("timestamps parse ISO 8601 and RFC 822") {
  auto iso = ParseTimestamp("2026-03-04T05:06:07Z");
  REQUIRE(iso);
  CHECK(FormatTimestamp(*iso) == "2026-03-04T05:06:07Z");
  CHECK(FormatTimestamp(*ParseTimestamp("2026-03-04T05:06:07.250+02:00")) ==
        "2026-03-04T03:06:07Z");
  CHECK(FormatTimestamp(*ParseTimestamp("2026-03-04")) == "2026-03-04T00:00:00Z");
  CHECK(FormatTimestamp(*ParseTimestamp("Wed, 04 Mar 2026 05:06:07 GMT")) ==
        "2026-03-04T05:06:07Z");
  CHECK(FormatTimestamp(*ParseTimestamp("Wed, 04 Mar 2026 05:06:07 -0500")) ==
        "2026-03-04T10:06:07Z");
  CHECK_FALSE(ParseTimestamp("yesterday"));
  CHECK_FALSE(ParseTimestamp("2026-02-30T00:00:00Z"));
  CHECK_FALSE(ParseTimestamp(""));
}

TEST_CASE("dates") {
  auto d = ParseDate("2026-12-31");
  REQUIRE(d);
  CHECK(FormatDate(*d) == "2026-12-31");
  CHECK(FormatDate(*d + std::chrono::days(1)) == "2027-01-01");
  CHECK(DateOf(*ParseTimestamp("2026-12-31T23:59:59Z")) == *d);
  CHECK_FALSE(ParseDate("2026-13-01"));
}

TEST_CASE("utf-8 decoding and case") {
  std::string s = "aé中😀";
  size_t pos = 0;
  CHECK(NextCodepoint(s, &pos) == U'a');
  CHECK(NextCodepoint(s, &pos) == U'é');
  CHECK(NextCodepoint(s, &pos) == U'中');
  CHECK(NextCodepoint(s, &pos) == U'😀');
  CHECK(pos == s.size());
  std::string bad = "\xff";
  pos = 0;
  CHECK(NextCodepoint(bad, &pos) == 0xFFFD);
  CHECK(pos == 1);
  CHECK(ToLowerUtf8("ÉTAT Ünd ABC") == "état ünd abc");
  CHECK(IsLogographic(U'中'));
  CHECK(IsLogographic(U'カ'));
  CHECK_FALSE(IsLogographic(U'a'));
  std::string out;
  AppendUtf8(&out, U'€');
  CHECK(out == "\xE2\x82\xAC");
}

TEST_CASE("whitespace and markup cleanup") {
  CHECK(NormalizeWhitespace("  a\t\tb \n\r c\x01 ") == "a b c");
  CHECK(NormalizeWhitespace("") == "");
  CHECK(NormalizeWhitespace(StripTags("<p>Fish &amp; <b>chips</b></p>")) == "Fish & chips");
  CHECK(StripTags("a &lt;b&gt; &quot;c&quot; &#39;d&#39;") == "a <b> \"c\" 'd'");
  CHECK(Trim("  x y  ") == "x y");
  CHECK(Split("a,,b", ',') == std::vector<std::string>{"a", "", "b"});
}
