// Copyright 2026 The XREF Authors.
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

#include "xref/kb.h"

#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.h"
#include "xref/error.h"

namespace xref {
namespace {

using testing::MakeEntity;
using testing::SmallKb;

constexpr char kTwoEntities[] =
    R"({"id":"E1","canonical_name":"Ann","nicknames":[],"gender":"male","entity_type":"person","relations":["E2"]})"
    "\n"
    R"({"id":"E2","canonical_name":"Bob","nicknames":[],"gender":"unknown","entity_type":"person","relations":[]})"
    "\n";

TEST(KbLoadTest, EmptyInput) {
  const KnowledgeBase kb = ParseKb("");
  EXPECT_EQ(kb.size(), 0);
  EXPECT_TRUE(kb.canonical_index().empty());
  EXPECT_TRUE(kb.alias_index().empty());
}

TEST(KbLoadTest, TwoEntityFixture) {
  const KnowledgeBase kb = ParseKb(kTwoEntities);
  EXPECT_EQ(kb.LookupSurface("Ann", false), IdSet({"E1"}));
  EXPECT_EQ(kb.RelatedEntities("E1"), IdSet({"E2"}));
  EXPECT_EQ(kb.Get("E1").gender, Gender::kMale);
  EXPECT_FALSE(kb.Get("E1").description.has_value());
}

TEST(KbLoadTest, DuplicateIdNamesTheId) {
  const std::string dup = std::string(kTwoEntities) +
      R"({"id":"E1","canonical_name":"X","nicknames":[],"gender":"male","entity_type":"p","relations":[]})";
  try {
    ParseKb(dup);
    FAIL() << "expected LoadError";
  } catch (const LoadError& e) {
    EXPECT_NE(std::string(e.what()).find("E1"), std::string::npos);
  }
}

TEST(KbLoadTest, UnknownRelationTarget) {
  EXPECT_THROW(ParseKb(R"({"id":"E1","canonical_name":"A","nicknames":[],"gender":"male","entity_type":"p","relations":["E9"]})"),
               LoadError);
}

TEST(KbLoadTest, MalformedLineReportsLineNumber) {
  const std::string bad = std::string(kTwoEntities) + "{not json\n";
  try {
    ParseKb(bad);
    FAIL() << "expected LoadError";
  } catch (const LoadError& e) {
    EXPECT_NE(std::string(e.what()).find("3"), std::string::npos) << e.what();
  }
}

TEST(KbLookupTest, CanonicalAndNicknames) {
  const KnowledgeBase kb = SmallKb();
  EXPECT_EQ(kb.LookupSurface("Ann", false), IdSet({"E1"}));
  EXPECT_EQ(kb.LookupSurface("ann", false), IdSet({"E1"}));
  EXPECT_TRUE(kb.LookupSurface("Zed", false).empty());
  EXPECT_TRUE(kb.LookupSurface("Zed", true).empty());
  EXPECT_TRUE(kb.LookupSurface("Bing", false).empty());
  EXPECT_EQ(kb.LookupSurface("Bing", true), IdSet({"E2", "E3"}));
}

TEST(KbLookupTest, Relations) {
  const KnowledgeBase kb = KnowledgeBase::FromEntities({
      MakeEntity("E1", "Ann", {}, {"E2", "E3"}),
      MakeEntity("E2", "Bob"),
      MakeEntity("E3", "Cat"),
  });
  EXPECT_EQ(kb.RelatedEntities("E1"), IdSet({"E2", "E3"}));
  EXPECT_TRUE(kb.RelatedEntities("E2").empty());
  EXPECT_EQ(kb.Neighbors("E2"), IdSet({"E1"}));
  EXPECT_THROW(kb.RelatedEntities("EX"), NotFoundError);
  EXPECT_THROW(kb.Get("EX"), NotFoundError);
}

TEST(KbLookupTest, Ambiguity) {
  const KnowledgeBase kb = SmallKb();
  EXPECT_FALSE(kb.IsAmbiguous("Ann"));
  EXPECT_TRUE(kb.IsAmbiguous("Bing"));
  EXPECT_FALSE(kb.IsAmbiguous("nobody"));
}

TEST(KbAliasTest, HarvestedAliasesAreSeparateFromCanonical) {
  KnowledgeBase kb = SmallKb();
  kb.AddAlias("E1", "Annie");
  EXPECT_EQ(kb.LookupCanonicalOrHarvested("Annie"), IdSet({"E1"}));
  EXPECT_EQ(kb.LookupSurface("Annie", true), IdSet({"E1"}));
  EXPECT_TRUE(kb.LookupSurface("Annie", false).empty());
  EXPECT_TRUE(kb.LookupCanonicalOrHarvested("Bing").empty());
  ASSERT_EQ(kb.HarvestedAliases("E1").size(), 1u);
  EXPECT_TRUE(kb.HarvestedAliases("E2").empty());
}

TEST(KbPropertyTest, EverySurfaceResolvesToItsEntity) {
  const KnowledgeBase kb = SmallKb();
  for (const auto& [id, e] : kb.entities()) {
    EXPECT_TRUE(kb.LookupSurface(e.canonical_name, true).count(e.id));
    for (const auto& n : e.nicknames)
      EXPECT_TRUE(kb.LookupSurface(n, true).count(e.id)) << n;
  }
}

TEST(KbPropertyTest, WithoutNicknamesIsSubset) {
  const KnowledgeBase kb = SmallKb();
  for (const std::string s : {"Ann", "Bob", "Cat", "Bing", "Zed"}) {
    const IdSet narrow = kb.LookupSurface(s, false);
    const IdSet wide = kb.LookupSurface(s, true);
    EXPECT_TRUE(std::includes(wide.begin(), wide.end(), narrow.begin(), narrow.end())) << s;
  }
}

TEST(KbPropertyTest, SerializeRoundTripKeepsIndices) {
  KnowledgeBase kb = SmallKb();
  kb.AddAlias("E3", "Kitty");
  const KnowledgeBase again = ParseKb(SerializeKb(kb));
  EXPECT_EQ(again.canonical_index(), kb.canonical_index());
  EXPECT_EQ(again.alias_index(), kb.alias_index());
  EXPECT_EQ(again.harvested_index(), kb.harvested_index());
  EXPECT_EQ(SerializeKb(again), SerializeKb(kb));
}

TEST(GenderTest, ParseRejectsUnknownNames) {
  EXPECT_EQ(ParseGender("female"), Gender::kFemale);
  EXPECT_EQ(GenderName(Gender::kNeutral), "neutral");
  EXPECT_THROW(ParseGender("robot"), InvalidArgument);
}

}  // namespace
}  // namespace xref
