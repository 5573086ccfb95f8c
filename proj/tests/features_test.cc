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

#include "xref/features.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fixtures.h"
#include "xref/rng.h"
#include "xref/synthetic.h"

namespace xref {
namespace {

using testing::MakeArticle;
using testing::MakeComment;
using testing::MakeEntity;
using testing::MentionOf;

// Textbook O(nm) table, kept independent of the library implementation.
int OracleLevenshtein(const std::u32string& a, const std::u32string& b) {
  std::vector<std::vector<int>> d(a.size() + 1, std::vector<int>(b.size() + 1));
  for (size_t i = 0; i <= a.size(); ++i) d[i][0] = static_cast<int>(i);
  for (size_t j = 0; j <= b.size(); ++j) d[0][j] = static_cast<int>(j);
  for (size_t i = 1; i <= a.size(); ++i)
    for (size_t j = 1; j <= b.size(); ++j)
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
  return d[a.size()][b.size()];
}

TEST(EditDistanceTest, Examples) {
  EXPECT_EQ(EditDistance(U"same", U"same"), 0);
  EXPECT_EQ(EditDistance(U"", U"ab"), 2);
  EXPECT_EQ(EditDistance(U"kitten", U"sitting"), 3);
  EXPECT_EQ(EditDistance(U"小编", U"编"), 1);
}

TEST(EditDistanceTest, AgreesWithOracleOnRandomStrings) {
  Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    std::u32string a, b;
    for (int i = rng.UniformInt(8); i > 0; --i) a += static_cast<char32_t>('a' + rng.UniformInt(3));
    for (int i = rng.UniformInt(8); i > 0; --i) b += static_cast<char32_t>('a' + rng.UniformInt(3));
    EXPECT_EQ(EditDistance(a, b), OracleLevenshtein(a, b));
  }
}

TEST(CharJaccardTest, Examples) {
  EXPECT_DOUBLE_EQ(CharJaccard(U"abc", U"abd"), 0.5);
  EXPECT_DOUBLE_EQ(CharJaccard(U"", U""), 0.0);
  EXPECT_DOUBLE_EQ(CharJaccard(U"aab", U"ba"), 1.0);
}

TEST(TfIdfTest, IdentityDisjointAndHandComputed) {
  const std::vector<std::vector<std::string>> docs = {{"a", "b"}, {"a", "c"}, {"d"}};
  const TfIdfModel m = TfIdfModel::Build(docs);
  const double idf_a = std::log(4.0 / 3.0) + 1, idf_b = std::log(2.0) + 1;
  EXPECT_NEAR(m.Idf("a"), idf_a, 1e-15);
  EXPECT_NEAR(m.Idf("zzz"), std::log(4.0) + 1, 1e-15);
  EXPECT_NEAR(m.Similarity(docs[0], docs[0]), 1.0, 1e-12);
  EXPECT_EQ(m.Similarity(docs[0], docs[2]), 0.0);
  // One shared term; idf_b equals idf_c.
  EXPECT_NEAR(m.Similarity(docs[0], docs[1]), idf_a * idf_a / (idf_a * idf_a + idf_b * idf_b),
              1e-12);
  EXPECT_EQ(m.Similarity(docs[0], {}), 0.0);
}

Comment Linked(const std::string& id, const std::string& surface, std::vector<std::string> gold) {
  Comment c = MakeComment(id, "A", "say " + surface + " now");
  c.mentions.push_back(MentionOf(c, surface, std::move(gold)));
  return c;
}

TEST(PriorTableTest, MaximumLikelihood) {
  std::vector<Comment> cs = {Linked("1", "X", {"E1"}), Linked("2", "X", {"E1"}),
                             Linked("3", "x", {"E1"}), Linked("4", "X", {"E2"}),
                             Linked("5", "Y", {"E3"}), Linked("6", "Z", {}),
                             Linked("7", "W", {"E1", "E2"})};
  std::vector<const Comment*> ptrs;
  for (const auto& c : cs) ptrs.push_back(&c);
  const PriorTable t = PriorTable::Build(ptrs);
  EXPECT_DOUBLE_EQ(t.Prob("X", "E1"), 0.75);
  EXPECT_DOUBLE_EQ(t.Prob("X", "E2"), 0.25);
  EXPECT_DOUBLE_EQ(t.Prob("Y", "E3"), 1.0);
  EXPECT_DOUBLE_EQ(t.Prob("Z", "NIL"), 1.0);
  EXPECT_DOUBLE_EQ(t.Prob("W", "E2"), 0.5);
  EXPECT_EQ(t.Prob("Q", "E1"), 0.0);
  for (const auto& [surface, row] : t.rows()) {
    double s = 0;
    for (const auto& [id, p] : row) s += p;
    EXPECT_NEAR(s, 1.0, 1e-12) << surface;
  }
}

TEST(LexiconTest, ParsesPronounsAndTransliteration) {
  const PronounLexicon p = PronounLexicon::Parse(
      R"({"surface":"he","gender":"male","plural":false})" "\n"
      R"({"surface":"they","gender":"unknown","plural":true})" "\n");
  ASSERT_NE(p.Find("He"), nullptr);
  EXPECT_EQ(p.Find("he")->gender, Gender::kMale);
  EXPECT_TRUE(p.Find("they")->plural);
  EXPECT_EQ(p.Find("it"), nullptr);
  const Transliterator t = Transliterator::Parse(R"({"char":"小","roman":"xiao"})");
  EXPECT_EQ(t.Apply(U"小a"), std::vector<std::string>({"xiao", "a"}));
}

class ExtractorTest : public ::testing::Test {
 protected:
  ExtractorTest() {
    Entity ann = MakeEntity("E1", "Ann Lee", {"Annie"}, {}, Gender::kFemale);
    ann.description = "Ann Lee is a singer who toured with Bob";
    Entity bob = MakeEntity("E2", "Bob", {}, {}, Gender::kMale);
    bob.description = "Bob plays football";
    kb_ = KnowledgeBase::FromEntities({ann, bob, MakeEntity("E3", "Cy")});
    train_ = {Linked("t1", "Annie", {"E1"}), Linked("t2", "Annie", {"E1"}),
              Linked("t3", "she", {})};
    for (const auto& c : train_) ptrs_.push_back(&c);
    priors_ = PriorTable::Build(ptrs_);
    FeatureConfig cfg;
    cfg.special_surfaces = {"editor"};
    cfg.pronouns = PronounLexicon::Parse(
        R"({"surface":"she","gender":"female","plural":false})" "\n"
        R"({"surface":"they","gender":"female","plural":true})" "\n");
    extractor_ = std::make_unique<FeatureExtractor>(kb_, priors_, ptrs_, cfg);
    article_ = MakeArticle("A", "Ann Lee again", {"Annie sang and Bob cheered", "Ann Lee won"});
  }

  FeatureVector At(const std::string& text, const std::string& surface, const std::string& cand) {
    comment_ = MakeComment("c", "A", text);
    return extractor_->Extract(comment_, MentionOf(comment_, surface, {}), article_, cand);
  }

  KnowledgeBase kb_;
  std::vector<Comment> train_;
  std::vector<const Comment*> ptrs_;
  PriorTable priors_;
  std::unique_ptr<FeatureExtractor> extractor_;
  Article article_;
  Comment comment_;
};

TEST_F(ExtractorTest, CanonicalIdentity) {
  const FeatureVector f = At("I saw Ann Lee today", "Ann Lee", "E1");
  EXPECT_EQ(f[kCanonMatch], 1);
  EXPECT_EQ(f[kNicknMatch], 0);
  EXPECT_EQ(f[kEditDist], 0);
  EXPECT_EQ(f[kCharJaccard], 1);
  EXPECT_EQ(f[kPinyJaccard], 1);
  EXPECT_EQ(f[kCommentDist], 0);
  EXPECT_EQ(f[kStartWithMent], 1);
  EXPECT_EQ(f[kStartInMent], 1);
  // The canonical segmenter keeps a full name as one word.
  EXPECT_EQ(f[kEqualWordCnt], 1);
  EXPECT_EQ(f[kMissWordCnt], 0);
  EXPECT_EQ(f[kAllInSrc], 1);
  // "Ann Lee" twice and "Annie" once in the article.
  EXPECT_EQ(f[kEntArtFreq], 3);
}

TEST_F(ExtractorTest, NicknameAndPrior) {
  const FeatureVector f = At("go Annie go", "Annie", "E1");
  EXPECT_EQ(f[kNicknMatch], 1);
  EXPECT_EQ(f[kCanonMatch], 0);
  EXPECT_EQ(f[kPriorProb], 1.0);
  EXPECT_EQ(f[kCommentDist], 100);
  EXPECT_EQ(f[kEditDist], EditDistance(U"annie", U"ann lee"));
  EXPECT_EQ(f[kAllInSrc], 0);
}

TEST_F(ExtractorTest, CommentDistanceInCharacters) {
  // "Bob" spans [0,3), "he" starts at 9.
  EXPECT_EQ(At("Bob said he won", "he", "E2")[kCommentDist], 6);
  EXPECT_EQ(At("he said Bob won", "he", "E2")[kCommentDist], 6);
  EXPECT_EQ(At("he said nothing", "he", "E2")[kCommentDist], 100);
}

TEST_F(ExtractorTest, GenderOnlyForSingularKnownPronouns) {
  EXPECT_EQ(At("she won", "she", "E1")[kGendMatch], 1);
  EXPECT_EQ(At("she won", "she", "E2")[kGendMatch], 0);
  EXPECT_EQ(At("she won", "she", "E3")[kGendMatch], 0);
  EXPECT_EQ(At("they won", "they", "E1")[kGendMatch], 0);
  EXPECT_EQ(At("Ann Lee won", "Ann Lee", "E1")[kGendMatch], 0);
}

TEST_F(ExtractorTest, PrefixAndSuffixFlags) {
  const FeatureVector f = At("Ann is here", "Ann", "E1");
  EXPECT_EQ(f[kStartWithMent], 1);
  EXPECT_EQ(f[kEndWithMent], 0);
  EXPECT_EQ(f[kStartInMent], 0);
  const FeatureVector g = At("Ann Lee Jr is here", "Ann Lee Jr", "E1");
  EXPECT_EQ(g[kStartInMent], 1);
  EXPECT_EQ(g[kStartWithMent], 0);
  EXPECT_EQ(g[kEqualWordCnt], 1);
  EXPECT_EQ(g[kMissWordCnt], 1);
  EXPECT_EQ(At("Lee is here", "Lee", "E1")[kEndWithMent], 1);
}

TEST_F(ExtractorTest, ContextFeatures) {
  const FeatureVector f = At("the singer toured with Bob", "singer", "E1");
  EXPECT_GT(f[kContxtSim], 0.0);
  EXPECT_LE(f[kContxtSim], 1.0);
  EXPECT_EQ(f[kMatchedNE], 1);  // "Bob" in both
  const FeatureVector g = At("the singer toured with Bob", "singer", "E3");
  EXPECT_EQ(g[kContxtSim], 0.0);
  EXPECT_EQ(g[kMatchedNE], 0);
}

TEST_F(ExtractorTest, NilConventions) {
  const FeatureVector f = At("the editor said", "editor", "NIL");
  EXPECT_EQ(f[kSpecial], 1);
  EXPECT_EQ(f[kEditDist], 100);
  EXPECT_EQ(f[kCommentDist], 100);
  for (int i : {kCanonMatch, kCharJaccard, kEntArtFreq, kContxtSim, kMatchedNE}) EXPECT_EQ(f[i], 0);
  EXPECT_EQ(At("she said", "she", "NIL")[kPriorProb], 1.0);
}

TEST_F(ExtractorTest, ContxtSimRankSharesBetterRank) {
  comment_ = MakeComment("c", "A", "singer toured football");
  const Mention m = MentionOf(comment_, "singer", {});
  CandidateSet set;
  set.candidates = {{"E3", Provenance::kCommentMatch},
                    {"E1", Provenance::kArticleMatch},
                    {"E2", Provenance::kArticleMatch},
                    {"NIL", Provenance::kNil}};
  const auto all = extractor_->ExtractAll(comment_, m, article_, set);
  ASSERT_EQ(all.size(), 4u);
  EXPECT_EQ(all[3][kContxtSimRank], 0.0);
  // Rank oracle: 1 + number of strictly better non-NIL candidates.
  for (int i = 0; i < 3; ++i) {
    int better = 0;
    for (int j = 0; j < 3; ++j) better += all[j][kContxtSim] > all[i][kContxtSim];
    EXPECT_DOUBLE_EQ(all[i][kContxtSimRank], 1.0 / (1 + better));
  }
  for (int i = 0; i < 4; ++i) {
    FeatureVector single = extractor_->Extract(comment_, m, article_, set.candidates[i].entity_id);
    single[kContxtSimRank] = all[i][kContxtSimRank];
    EXPECT_EQ(single, all[i]);
  }
}

// Brute-force prefix/suffix scan and range checks over a synthetic corpus.
TEST(FeaturePropertyTest, RangesAndPrefixFlagsOnSyntheticCorpus) {
  SyntheticConfig cfg;
  cfg.num_articles = 12;
  cfg.num_titles = 10;
  const SyntheticData d = GenSynthetic(cfg, 5);
  const auto train = d.corpus.CommentsIn(d.split.train);
  const PriorTable priors = PriorTable::Build(train);
  const FeatureExtractor ex(d.kb, priors, train, FeatureConfig{});
  const CandidateBuilder builder(d.kb, false);
  for (const Comment& c : d.corpus.comments()) {
    const Article& a = d.corpus.article(c.article_id);
    for (const Mention& m : c.mentions) {
      const CandidateSet set = builder.Build(c, m, a);
      const auto fs = ex.ExtractAll(c, m, a, set);
      const std::u32string s = Utf8ToU32(NormalizeSurface(U32ToUtf8(c.Surface(m))));
      for (size_t i = 0; i < fs.size(); ++i) {
        const FeatureVector& f = fs[i];
        for (int k : {kCanonMatch, kNicknMatch, kGendMatch, kSpecial, kStartWithMent,
                      kEndWithMent, kStartInMent, kEndInMent, kAllInSrc})
          EXPECT_TRUE(f[k] == 0 || f[k] == 1);
        for (int k : {kCharJaccard, kPinyJaccard, kPriorProb, kContxtSim, kContxtSimRank})
          EXPECT_TRUE(f[k] >= 0 && f[k] <= 1);
        for (double v : f) EXPECT_GE(v, 0);
        if (set.candidates[i].is_nil()) continue;
        const Entity& e = d.kb.Get(set.candidates[i].entity_id);
        std::vector<std::string> names = {e.canonical_name};
        names.insert(names.end(), e.nicknames.begin(), e.nicknames.end());
        bool sw = false, si = false;
        for (const auto& n : names) {
          const std::u32string nn = Utf8ToU32(NormalizeSurface(n));
          sw |= nn.rfind(s, 0) == 0;
          si |= s.rfind(nn, 0) == 0;
        }
        EXPECT_EQ(f[kStartWithMent], sw ? 1 : 0);
        EXPECT_EQ(f[kStartInMent], si ? 1 : 0);
      }
    }
  }
}

}  // namespace
}  // namespace xref
