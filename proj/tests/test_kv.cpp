// Copyright 2026 The fairdp Authors
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "fairdp/errors.hpp"
#include "fairdp/kv.hpp"
#include "support/synthetic_adult.hpp"

using fairdp::KvDoc;

TEST_CASE("set, get and ordering") {
  KvDoc doc;
  doc.set("name", "value");
  doc.set_int("count", -42);
  doc.set_double("ratio", 0.25);
  CHECK(doc.has("name"));
  CHECK(!doc.has("absent"));
  CHECK(doc.get("name") == "value");
  CHECK(doc.get_int("count") == -42);
  CHECK(doc.get_double("ratio") == 0.25);
  REQUIRE(doc.entries().size() == 3);
  CHECK(doc.entries()[0].first == "name");
  CHECK(doc.entries()[2].first == "ratio");
}

TEST_CASE("set overwrites in place") {
  KvDoc doc;
  doc.set("a", "1");
  doc.set("b", "2");
  doc.set("a", "3");
  REQUIRE(doc.entries().size() == 2);
  CHECK(doc.entries()[0].first == "a");
  CHECK(doc.get("a") == "3");
}

TEST_CASE("missing key and bad numbers throw ParseError") {
  KvDoc doc;
  doc.set("text", "not a number");
  CHECK_THROWS_AS((void)doc.get("absent"), fairdp::ParseError);
  CHECK_THROWS_AS((void)doc.get_double("text"), fairdp::ParseError);
  CHECK_THROWS_AS((void)doc.get_int("text"), fairdp::ParseError);
}

TEST_CASE("doubles round-trip exactly through text") {
  const double values[] = {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 6.28215752123450012,
                           std::numeric_limits<double>::denorm_min()};
  KvDoc doc;
  int i = 0;
  for (double v : values) doc.set_double("k" + std::to_string(i++), v);
  const KvDoc back = KvDoc::from_text(doc.to_text());
  i = 0;
  for (double v : values) CHECK(back.get_double("k" + std::to_string(i++)) == v);
}

TEST_CASE("text form parses with surrounding spaces and skips blanks") {
  const KvDoc doc = KvDoc::from_text("  alpha =  1 \n\n beta= two words \n");
  CHECK(doc.get("alpha") == "1");
  CHECK(doc.get("beta") == "two words");
}

TEST_CASE("malformed line throws ParseError") {
  CHECK_THROWS_AS(KvDoc::from_text("just text without equals\n"), fairdp::ParseError);
}

TEST_CASE("save and load") {
  testsupport::TempDir dir;
  KvDoc doc;
  doc.set("key", "value");
  doc.set_double("pi", 3.141592653589793);
  doc.save(dir.str("doc.txt"));
  const KvDoc back = KvDoc::load(dir.str("doc.txt"));
  CHECK(back.get("key") == "value");
  CHECK(back.get_double("pi") == 3.141592653589793);
  CHECK_THROWS_AS(KvDoc::load(dir.str("missing.txt")), fairdp::IoError);
}

TEST_CASE("trim") {
  CHECK(fairdp::trim("  x  ") == "x");
  CHECK(fairdp::trim("\t a b \r\n") == "a b");
  CHECK(fairdp::trim("") == "");
  CHECK(fairdp::trim("   ") == "");
}
