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

#include "xref/eval.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "xref/error.h"
#include "xref/rng.h"

namespace xref {
namespace {

using Ids = std::vector<std::string>;

PredictionRecord Rec(int i, Ids ranking, Ids gold,
                     std::optional<MentionType> type = MentionType::kCanonical) {
  PredictionRecord r;
  r.comment_id = "c" + std::to_string(i);
  r.start = i;
  r.end = i + 1;
  r.ranking = std::move(ranking);
  r.gold = std::move(gold);
  r.type = type;
  return r;
}

TEST(AccuracyTest, Examples) {
  const std::vector<PredictionRecord> all = {Rec(0, {"E1"}, {"E1"}), Rec(1, {"NIL", "E1"}, {"NIL"})};
  EXPECT_EQ(Accuracy(all, true), 1.0);
  const std::vector<PredictionRecord> three = {
      Rec(0, {"E1", "E2"}, {"E1"}), Rec(1, {"E2", "E1"}, {"E1"}), Rec(2, {"NIL"}, {"NIL"}),
      Rec(3, {"E3"}, {"E3"})};
  EXPECT_EQ(Accuracy(three, true), 0.75);
  EXPECT_NEAR(Accuracy(three, false), 2.0 / 3, 1e-15);
  const std::vector<PredictionRecord> nil = {Rec(0, {"NIL"}, {"NIL"})};
  EXPECT_THROW(Accuracy(nil, false), InvalidArgument);
  const std::vector<PredictionRecord> plural = {Rec(0, {"E1", "E2"}, {"E1", "E2"})};
  EXPECT_THROW(Accuracy(plural, true), InvalidArgument);
  EXPECT_THROW(Mrr(plural, true), InvalidArgument);
}

TEST(MrrTest, Examples) {
  const std::vector<PredictionRecord> top = {Rec(0, {"E1", "E2"}, {"E1"})};
  EXPECT_EQ(Mrr(top, true), 1.0);
  const std::vector<PredictionRecord> third = {Rec(0, {"E2", "E3", "E1"}, {"E1"})};
  EXPECT_NEAR(Mrr(third, true), 1.0 / 3, 1e-15);
  const std::vector<PredictionRecord> missing = {Rec(0, {"E1"}, {"E1"}), Rec(1, {"E2"}, {"E1"})};
  EXPECT_EQ(Mrr(missing, true), 0.5);
}

TEST(AccAtKTest, Examples) {
  const std::vector<PredictionRecord> r = {
      Rec(0, {"E2", "E1", "E3"}, {"E1", "E2"}), Rec(1, {"E1", "E3", "E2"}, {"E1", "E2"}),
      Rec(2, {"E3"}, {"E1", "E2"})};
  EXPECT_NEAR(AccAtK(r), 1.0 / 3, 1e-15);
  EXPECT_TRUE(IsCorrect(r[0]));
  EXPECT_FALSE(IsCorrect(r[1]));
  const std::vector<PredictionRecord> singular = {Rec(0, {"E1"}, {"E1"})};
  EXPECT_THROW(AccAtK(singular), InvalidArgument);
}

TEST(NdcgTest, Examples) {
  const std::vector<PredictionRecord> perfect = {Rec(0, {"E2", "E1", "E3"}, {"E1", "E2"})};
  EXPECT_NEAR(Ndcg(perfect), 1.0, 1e-15);
  const std::vector<PredictionRecord> gap = {Rec(0, {"E1", "E3", "E2"}, {"E1", "E2"})};
  const double dcg = 1 + 1 / std::log2(4.0), idcg = 1 + 1 / std::log2(3.0);
  EXPECT_NEAR(Ndcg(gap), dcg / idcg, 1e-15);
  EXPECT_NEAR(Ndcg(gap, true), 1 / idcg, 1e-15);
  const std::vector<PredictionRecord> none = {Rec(0, {"E3", "NIL"}, {"E1", "E2"})};
  EXPECT_EQ(Ndcg(none), 0.0);
}

TEST(MetricPropertyTest, MrrDominatesAccuracyAndPermutationInvariance) {
  Rng rng(1);
  const Ids ents = {"E1", "E2", "E3", "E4", "NIL"};
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<PredictionRecord> singular, plural;
    for (int i = 0; i < 15; ++i) {
      Ids ranking = ents;
      rng.Shuffle(std::span<std::string>(ranking));
      ranking.resize(1 + rng.UniformInt(5));
      singular.push_back(Rec(i, ranking, {ents[rng.UniformInt(5)]}));
      plural.push_back(Rec(i, ranking, {"E1", ents[1 + rng.UniformInt(3)]}));
    }
    EXPECT_GE(Mrr(singular, true), Accuracy(singular, true));
    const double acck = AccAtK(plural), ndcg = Ndcg(plural);
    std::reverse(plural.begin(), plural.end());
    EXPECT_NEAR(AccAtK(plural), acck, 1e-15);
    EXPECT_NEAR(Ndcg(plural), ndcg, 1e-12);
    // Consistent renaming of entity ids.
    auto rename = [](std::string& s) { if (s != "NIL") s = "X" + s; };
    std::vector<PredictionRecord> renamed = singular;
    for (auto& r : renamed) {
      std::for_each(r.ranking.begin(), r.ranking.end(), rename);
      std::for_each(r.gold.begin(), r.gold.end(), rename);
    }
    EXPECT_EQ(Mrr(renamed, true), Mrr(singular, true));
    EXPECT_EQ(Accuracy(renamed, true), Accuracy(singular, true));
  }
}

TEST(ErrorBreakdownTest, Examples) {
  const std::vector<PredictionRecord> r = {
      Rec(0, {"E1"}, {"E1"}, MentionType::kCanonical),
      Rec(1, {"E1"}, {"E2"}, MentionType::kPronominal),
      Rec(2, {"E2"}, {"E2"}, MentionType::kPronominal),
      Rec(3, {"E1", "E2"}, {"E2", "E1"}, MentionType::kPlural)};
  const auto b = ErrorBreakdown(r);
  EXPECT_EQ(b.at(MentionType::kPronominal).errors, 1);
  EXPECT_EQ(b.at(MentionType::kPronominal).total, 2);
  EXPECT_EQ(b.at(MentionType::kCanonical).errors, 0);
  EXPECT_EQ(b.at(MentionType::kPlural).errors, 0);
  int total = 0;
  for (const auto& [t, e] : b) total += e.total;
  EXPECT_EQ(total, 4);
  EXPECT_NE(ErrorBreakdownTable(b).find("pronominal"), std::string::npos);
  EXPECT_TRUE(ErrorBreakdownToJson(b).contains("pronominal"));
  const std::vector<PredictionRecord> untyped = {Rec(0, {"E1"}, {"E1"}, std::nullopt)};
  EXPECT_THROW(ErrorBreakdown(untyped), InvalidArgument);
}

Metric AccMetric() {
  return [](std::span<const PredictionRecord> r) { return Accuracy(r, true); };
}

TEST(ApproxRandomizationTest, IdenticalSystemsGiveOne) {
  std::vector<PredictionRecord> a;
  for (int i = 0; i < 10; ++i) a.push_back(Rec(i, {i % 2 ? "E1" : "E2"}, {"E1"}));
  EXPECT_EQ(ApproxRandomization(a, a, AccMetric(), 999, 1), 1.0);
}

TEST(ApproxRandomizationTest, ExtremeFixture) {
  std::vector<PredictionRecord> a, b;
  for (int i = 0; i < 20; ++i) {
    a.push_back(Rec(i, {"E1"}, {"E1"}));
    b.push_back(Rec(i, {"E2"}, {"E1"}));
  }
  const double p = ApproxRandomization(a, b, AccMetric(), 9999, 7);
  EXPECT_LT(p, 0.001);
  EXPECT_GT(p, 0.0);
  EXPECT_EQ(p, ApproxRandomization(a, b, AccMetric(), 9999, 7));
}

TEST(ApproxRandomizationTest, MisalignedKeys) {
  std::vector<PredictionRecord> a = {Rec(0, {"E1"}, {"E1"})};
  std::vector<PredictionRecord> b = {Rec(1, {"E1"}, {"E1"})};
  EXPECT_THROW(ApproxRandomization(a, b, AccMetric(), 10, 1), InvalidArgument);
}

TEST(PredictionsIoTest, RoundTripAndDuplicates) {
  const std::vector<PredictionRecord> r = {Rec(0, {"E1", "NIL"}, {"E1"}),
                                           Rec(1, {"NIL"}, {"NIL"}, MentionType::kNil),
                                           Rec(2, {"E2"}, {"E1", "E2"}, std::nullopt)};
  const auto back = ParsePredictions(SerializePredictions(r));
  ASSERT_EQ(back.size(), 3u);
  EXPECT_EQ(SerializePredictions(back), SerializePredictions(r));
  EXPECT_TRUE(back[1].is_nil_gold());
  EXPECT_FALSE(back[2].type.has_value());
  EXPECT_THROW(
      ParsePredictions(R"({"comment_id":"c","start":0,"end":1,"ranking":["E1","E1"],"gold":["E1"]})"),
      Error);
}

TEST(MetricReportTest, OmitsIneligibleMetrics) {
  const std::vector<PredictionRecord> r = {Rec(0, {"E1"}, {"E1"}), Rec(1, {"NIL"}, {"NIL"})};
  const Json j = MetricReport(r);
  EXPECT_EQ(j["accuracy"], 1.0);
  EXPECT_FALSE(j.contains("ndcg"));
  EXPECT_NE(MetricTable(j).find("accuracy"), std::string::npos);
}

}  // namespace
}  // namespace xref
