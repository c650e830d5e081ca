// Copyright 2026 The ovlift Authors
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

#include "ovlift/vocabulary.hpp"
#include "test_util.hpp"

using namespace ovlift;
using test::cat;

namespace {

SceneVocabulary vocab_of(std::initializer_list<const char*> names) {
  SceneVocabulary vocab;
  for (const char* name : names) vocab.insert(cat(name));
  return vocab;
}

}  // namespace

TEST_SUITE("vocabulary") {

TEST_CASE("canonicalization lowercases, maps underscores, and collapses spaces") {
  CHECK(cat(" Coffee_Table ").str() == "coffee table");
  CHECK(cat("SOFA").str() == "sofa");
  CHECK(cat("night\tstand").str() == "night stand");
  CHECK(cat("a   b").str() == "a b");
  CHECK_FALSE(Category::canonicalize("   ").has_value());
  CHECK_FALSE(Category::canonicalize("___").has_value());
  CHECK_FALSE(Category::canonicalize("").has_value());
  CHECK(cat("Chair") == cat("chair"));
}

TEST_CASE("proposal lines are split, deduplicated, and truncated") {
  const auto parsed = parse_vocab_response("chair, table, sofa, lamp, door", 5);
  REQUIRE(parsed.size() == 5);
  CHECK(parsed[0].str() == "chair");
  CHECK(parsed[4].str() == "door");

  const auto deduped = parse_vocab_response("chair, Chair, CHAIR", 5);
  REQUIRE(deduped.size() == 1);
  CHECK(deduped[0].str() == "chair");

  const auto truncated = parse_vocab_response("a, b, c, d, e", 3);
  REQUIRE(truncated.size() == 3);
  CHECK(truncated[2].str() == "c");

  CHECK(parse_vocab_response("", 5).empty());
  CHECK(parse_vocab_response(" , ,, ", 5).empty());
  CHECK_THROWS_AS(parse_vocab_response("chair", 0), ConfigError);
}

TEST_CASE("aggregation unions per-view lists in first-appearance order") {
  const auto vocab = aggregate_vocabulary({{cat("chair"), cat("table")},
                                           {cat("table"), cat("sofa")}});
  REQUIRE(vocab.size() == 3);
  CHECK(vocab.categories()[0].str() == "chair");
  CHECK(vocab.categories()[1].str() == "table");
  CHECK(vocab.categories()[2].str() == "sofa");
  CHECK(vocab.index_of(cat("sofa")) == std::size_t{2});
  CHECK_FALSE(vocab.index_of(cat("bed")).has_value());
}

TEST_CASE("vocabulary insert is idempotent on the index") {
  SceneVocabulary vocab;
  CHECK(vocab.insert(cat("chair")) == 0);
  CHECK(vocab.insert(cat("table")) == 1);
  CHECK(vocab.insert(cat("chair")) == 0);
  CHECK(vocab.size() == 2);
}

TEST_CASE("singleton and universal policies cover the vocabulary") {
  const SceneVocabulary vocab = vocab_of({"chair", "table", "sofa"});

  const CompatibilityGroups strict = CompatibilityGroups::singletons(vocab);
  CHECK(strict.groups().size() == 3);
  CHECK(strict.group_of(cat("chair")) != strict.group_of(cat("sofa")));

  const CompatibilityGroups open = CompatibilityGroups::universal(vocab);
  CHECK(open.groups().size() == 1);
  CHECK(open.group_of(cat("chair")) == open.group_of(cat("sofa")));

  CHECK_THROWS_AS(strict.group_of(cat("bed")), ValidationError);
}

TEST_CASE("add_group rejects duplicate claims") {
  CompatibilityGroups groups;
  groups.add_group("seats", {cat("chair"), cat("sofa")}, true);
  CHECK_THROWS_AS(groups.add_group("more", {cat("sofa"), cat("bed")}, true),
                  ValidationError);
  CHECK_THROWS_AS(groups.add_group("empty", {}, true), ValidationError);
}

TEST_CASE("grouping response: provider groups plus singleton completion") {
  const SceneVocabulary vocab = vocab_of({"chair", "sofa", "couch", "recliner", "lamp"});
  const auto result =
      parse_group_spec("seating: [chair, sofa, couch, recliner]", vocab);
  CHECK(result.warnings.empty());

  // One provider group of four, then a singleton for the unclaimed category.
  REQUIRE(result.groups.groups().size() == 2);
  CHECK(result.groups.groups()[0].members.size() == 4);
  CHECK(result.groups.groups()[0].from_provider);
  CHECK(result.groups.groups()[1].members.size() == 1);
  CHECK(result.groups.groups()[1].members[0].str() == "lamp");
  CHECK_FALSE(result.groups.groups()[1].from_provider);

  CHECK(result.groups.group_of(cat("chair")) == result.groups.group_of(cat("recliner")));
  CHECK(result.groups.group_of(cat("lamp")) != result.groups.group_of(cat("chair")));
}

TEST_CASE("grouping response: first group wins, degenerate remainder discarded") {
  const SceneVocabulary vocab = vocab_of({"chair", "sofa", "bed"});
  const auto result = parse_group_spec("g1: [chair, sofa]\ng2: [sofa, bed]", vocab);

  // g2 loses sofa to g1 and collapses below two members.
  REQUIRE(result.warnings.size() == 1);
  CHECK(result.warnings[0].find("fewer than two") != std::string::npos);

  REQUIRE(result.groups.groups().size() == 2);
  CHECK(result.groups.groups()[0].name == "g1");
  CHECK(result.groups.groups()[0].members.size() == 2);
  CHECK(result.groups.groups()[1].members.size() == 1);  // bed singleton
  CHECK(result.groups.group_of(cat("bed")) != result.groups.group_of(cat("sofa")));
}

TEST_CASE("grouping response: comments, noise, and non-vocabulary members") {
  const SceneVocabulary vocab = vocab_of({"chair", "sofa"});
  const auto result = parse_group_spec(
      "# synonym groups follow\n"
      "\n"
      "this line has no brackets\n"
      "g: [chair, chair, throne, sofa]\n",
      vocab);

  REQUIRE(result.warnings.size() == 1);
  CHECK(result.warnings[0].find("line 3") != std::string::npos);

  // In-line duplicate and the out-of-vocabulary name are dropped silently.
  REQUIRE(result.groups.groups().size() == 1);
  CHECK(result.groups.groups()[0].members.size() == 2);
}

TEST_CASE("grouping response: empty text yields all singletons") {
  const SceneVocabulary vocab = vocab_of({"chair", "sofa"});
  const auto result = parse_group_spec("", vocab);
  CHECK(result.warnings.empty());
  CHECK(result.groups.groups().size() == 2);
}

TEST_CASE("free group_of matches the member function") {
  const SceneVocabulary vocab = vocab_of({"chair", "sofa"});
  const CompatibilityGroups groups = CompatibilityGroups::singletons(vocab);
  CHECK(group_of(cat("chair"), groups) == groups.group_of(cat("chair")));
}

}  // TEST_SUITE
