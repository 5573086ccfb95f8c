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

#include "xref/synthetic.h"

#include <gtest/gtest.h>

#include <algorithm>

#include "xref/candidates.h"
#include "xref/error.h"

namespace xref {
namespace {

SyntheticConfig Small() {
  SyntheticConfig c;
  c.num_entities = 24;
  c.num_clusters = 3;
  c.num_articles = 20;
  c.comments_per_article = 4;
  c.num_titles = 100;
  c.unlabeled_articles = 3;
  c.unlabeled_comments_per_article = 2;
  return c;
}

std::vector<const Comment*> AllComments(const Corpus& c) {
  std::vector<const Comment*> out;
  for (const Comment& cm : c.comments()) out.push_back(&cm);
  return out;
}

TEST(SyntheticTest, SameSeedIsByteIdentical) {
  const SyntheticData a = GenSynthetic(Small(), 5);
  const SyntheticData b = GenSynthetic(Small(), 5);
  EXPECT_EQ(SerializeKb(a.kb), SerializeKb(b.kb));
  EXPECT_EQ(SerializeArticles(a.corpus), SerializeArticles(b.corpus));
  EXPECT_EQ(SerializeComments(a.corpus.comments()), SerializeComments(b.corpus.comments()));
  EXPECT_EQ(SerializeSplit(a.split), SerializeSplit(b.split));
  EXPECT_EQ(a.titles, b.titles);
  const SyntheticData c = GenSynthetic(Small(), 6);
  EXPECT_NE(SerializeComments(a.corpus.comments()), SerializeComments(c.corpus.comments()));
}

TEST(SyntheticTest, ZeroNilMeansNoEmptyGold) {
  SyntheticConfig c = Small();
  c.frac_nil = 0;
  const SyntheticData d = GenSynthetic(c, 1);
  ASSERT_GT(d.corpus.num_mentions(), 0);
  for (const Comment& cm : d.corpus.comments())
    for (const Mention& m : cm.mentions) EXPECT_FALSE(m.is_nil());
}

TEST(SyntheticTest, DefaultConfigHasFullCoverage) {
  const SyntheticData d = GenSynthetic(SyntheticConfig{}, 2);
  const auto comments = AllComments(d.corpus);
  EXPECT_DOUBLE_EQ(GoldCoverage(comments, d.corpus, d.kb, false), 1.0);
}

TEST(SyntheticTest, ValidAgainstKbAndSplit) {
  const SyntheticData d = GenSynthetic(Small(), 3);
  EXPECT_NO_THROW(ValidateAgainstKb(d.corpus, d.kb));
  EXPECT_NO_THROW(ValidateSplit(d.split));
  EXPECT_EQ(d.split.train.size() + d.split.valid.size() + d.split.test.size(),
            d.corpus.articles().size());
  EXPECT_EQ(static_cast<int>(d.titles.size()), 100);
  EXPECT_FALSE(d.unlabeled.comments().empty());
  for (const Comment& c : d.unlabeled.comments()) EXPECT_TRUE(c.mentions.empty());
}

TEST(SyntheticTest, AmbiguousMentionsResolveThroughArticle) {
  const SyntheticData d = GenSynthetic(Small(), 4);
  int ambiguous = 0;
  for (const Comment& c : d.corpus.comments()) {
    const Article& a = d.corpus.article(c.article_id);
    const auto ea = ArticleEntitySet(a, d.kb);
    for (const Mention& m : c.mentions) {
      const std::string surface = U32ToUtf8(c.Surface(m));
      if (m.is_nil() || !d.kb.IsAmbiguous(surface) || m.gold.size() != 1) continue;
      if (d.kb.LookupSurface(surface, true).count(m.gold[0]) == 0) continue;
      ++ambiguous;
      EXPECT_NE(std::find(ea.begin(), ea.end(), m.gold[0]), ea.end()) << surface;
    }
  }
  EXPECT_GT(ambiguous, 0);
}

TEST(SyntheticTest, PluralMentionsHaveSeveralGolds) {
  SyntheticConfig c = Small();
  c.frac_plural = 0.3;
  const SyntheticData d = GenSynthetic(c, 8);
  int plural = 0;
  for (const Comment& cm : d.corpus.comments())
    for (const Mention& m : cm.mentions)
      if (m.type == MentionType::kPlural) {
        ++plural;
        EXPECT_GE(m.gold.size(), 2u);
      }
  EXPECT_GT(plural, 0);
}

TEST(SyntheticTest, InfeasibleConfigs) {
  SyntheticConfig c = Small();
  c.num_entities = 1;
  EXPECT_THROW(GenSynthetic(c, 1), InvalidArgument);
  c = Small();
  c.frac_nil = 0.9;
  c.frac_other = 0.5;
  EXPECT_THROW(GenSynthetic(c, 1), InvalidArgument);
}

TEST(SyntheticTest, ConfigJsonRoundTrip) {
  SyntheticConfig c = Small();
  c.frac_offarticle_alias = 0.25;
  const Json j = SyntheticConfigToJson(c);
  EXPECT_EQ(SyntheticConfigToJson(SyntheticConfigFromJson(j)), j);
}

}  // namespace
}  // namespace xref
