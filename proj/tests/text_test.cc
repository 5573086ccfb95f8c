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

#include "xref/text.h"

#include <gtest/gtest.h>

#include "xref/error.h"

namespace xref {
namespace {

TEST(Utf8Test, RoundTripsMixedScripts) {
  const std::string s = "Ann 小编 café";
  const std::u32string u = Utf8ToU32(s);
  EXPECT_EQ(u.size(), 11u);
  EXPECT_EQ(U32ToUtf8(u), s);
}

TEST(Utf8Test, RejectsInvalidBytes) {
  EXPECT_THROW(Utf8ToU32("\xff\xfe"), InvalidArgument);
}

TEST(NormalizeTest, FoldsAsciiOnlyAndComposes) {
  EXPECT_EQ(NormalizeSurface("AnN"), "ann");
  // Decomposed e + combining acute becomes the composed form.
  EXPECT_EQ(NormalizeSurface("Cafe\xcc\x81"), "caf\xc3\xa9");
  EXPECT_EQ(NormalizeSurface("小编"), "小编");
  EXPECT_TRUE(IsNfc("caf\xc3\xa9"));
  EXPECT_FALSE(IsNfc("cafe\xcc\x81"));
}

TEST(SurfaceMatcherTest, LongestFirstNonOverlapping) {
  SurfaceMatcher m;
  const int ann = m.Add("Ann");
  const int ann_lee = m.Add("Ann Lee");
  const auto hits = m.FindAll(Utf8ToU32("ann lee met Ann"));
  ASSERT_EQ(hits.size(), 2u);
  EXPECT_EQ(hits[0].key, ann_lee);
  EXPECT_EQ(hits[0].start, 0);
  EXPECT_EQ(hits[0].end, 7);
  EXPECT_EQ(hits[1].key, ann);
  EXPECT_EQ(hits[1].start, 12);
}

TEST(SurfaceMatcherTest, LatinNeedsWordBoundaryCjkDoesNot) {
  SurfaceMatcher m;
  m.Add("Ann");
  m.Add("小编");
  EXPECT_TRUE(m.FindAll(Utf8ToU32("Annabel")).empty());
  EXPECT_TRUE(m.FindAll(Utf8ToU32("xAnn")).empty());
  EXPECT_EQ(m.FindAll(Utf8ToU32("Ann's")).size(), 1u);
  EXPECT_EQ(m.FindAll(Utf8ToU32("我是小编啊")).size(), 1u);
}

TEST(SurfaceMatcherTest, DuplicateSurfacesShareKey) {
  SurfaceMatcher m;
  EXPECT_EQ(m.Add("Bing"), m.Add("BING"));
  EXPECT_EQ(m.size(), 1);
}

TEST(SurfaceMatcherTest, FindEveryReportsOverlaps) {
  SurfaceMatcher m;
  m.Add("ab");
  m.Add("bc");
  EXPECT_EQ(m.FindAll(Utf8ToU32("的ab c")).size(), 1u);
  m.Add("小编");
  m.Add("编辑");
  EXPECT_EQ(m.FindAll(Utf8ToU32("小编辑")).size(), 1u);
  EXPECT_EQ(m.FindEvery(Utf8ToU32("小编辑")).size(), 2u);
}

TEST(TokenizerTest, WhitespaceSplitsPunctuationAndFolds) {
  WhitespaceTokenizer t;
  const auto toks = t.Tokenize(Utf8ToU32("Hello, World! ok-go"));
  ASSERT_EQ(toks.size(), 3u);
  EXPECT_EQ(U32ToUtf8(toks[0]), "hello");
  EXPECT_EQ(U32ToUtf8(toks[1]), "world");
  EXPECT_EQ(U32ToUtf8(toks[2]), "ok-go");
}

TEST(TokenizerTest, LongestMatchKeepsMultiWordNames) {
  LongestMatchTokenizer t({"Ann Lee"});
  const auto toks = t.Tokenize(Utf8ToU32("I saw Ann Lee today"));
  ASSERT_EQ(toks.size(), 4u);
  EXPECT_EQ(U32ToUtf8(toks[2]), "ann lee");
}

}  // namespace
}  // namespace xref
