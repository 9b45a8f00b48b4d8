// Copyright 2026 The GANC Authors.
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

#include "ganc/recommenders.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "ganc/error.h"
#include "test_util.h"

namespace ganc {
namespace {

using testing::R;

// Items 1, 2, 3 with popularity 5, 3, 1; user 1 rated item 1, user 9 only
// rated item 4 (popularity 1 as well).
SplitDataset PopSplit() {
  std::vector<Rating> train;
  for (int u = 1; u <= 5; ++u) train.push_back(R(u, 1, 4));
  for (int u = 2; u <= 4; ++u) train.push_back(R(u, 2, 4));
  train.push_back(R(5, 3, 4));
  train.push_back(R(9, 4, 4));
  return SplitDataset::FromParts(train, {});
}

TEST(PopScorerTest, TopUnseenPopularItems) {
  const auto split = PopSplit();
  const auto stats = ComputeItemStats(split);
  const PopScorer pop(split, stats, 2);
  const Index u = split.UserIndex(1);
  EXPECT_EQ(pop.Score(u, split.ItemIndex(1)), 0.0);
  EXPECT_EQ(pop.Score(u, split.ItemIndex(2)), 1.0);
  EXPECT_EQ(pop.Score(u, split.ItemIndex(3)), 1.0);
  EXPECT_EQ(pop.Score(u, split.ItemIndex(4)), 0.0);
}

TEST(PopScorerTest, SingleMostPopularForFreshUser) {
  const auto split = PopSplit();
  const auto stats = ComputeItemStats(split);
  const PopScorer pop(split, stats, 1);
  const Index u = split.UserIndex(9);
  ASSERT_EQ(pop.TopItems(u).size(), 1u);
  EXPECT_EQ(split.item_id(pop.TopItems(u)[0]), 1);
}

TEST(PopScorerTest, FullCutoffScoresEveryUnseenItem) {
  const auto split = PopSplit();
  const auto stats = ComputeItemStats(split);
  const PopScorer pop(split, stats, static_cast<int>(split.num_items()));
  const Index u = split.UserIndex(9);
  for (Index i = 0; i < split.num_items(); ++i) {
    EXPECT_EQ(pop.Score(u, i), split.RatedInTrain(u, i) ? 0.0 : 1.0);
  }
}

TEST(PopScorerTest, TiesGoToSmallerItemId) {
  // Items 3 and 4 both have popularity 1; item 3 wins the last slot.
  const auto split = PopSplit();
  const auto stats = ComputeItemStats(split);
  const PopScorer pop(split, stats, 3);
  const Index u = split.UserIndex(9);
  std::vector<ItemId> ids;
  for (Index i : pop.TopItems(u)) ids.push_back(split.item_id(i));
  EXPECT_EQ(ids, (std::vector<ItemId>{1, 2, 3}));
}

TEST(RsvdTest, SingleRatingIsFitWithoutRegularization) {
  const auto split = SplitDataset::FromParts({R(1, 1, 4)}, {});
  const auto model = RsvdTrain(split, {1, 0.0, 0.05, 2000, 1});
  EXPECT_NEAR(model.Predict(0, 0), 4.0, 1e-6);
  EXPECT_NEAR(Rmse(model, split, split.train()), 0.0, 1e-6);
}

TEST(RsvdTest, HeavyRegularizationShrinksFactors) {
  std::mt19937_64 rng(1);
  auto inst = testing::RandomInstance(rng, 8, 10, 6);
  const auto model = RsvdTrain(inst.split, {4, 1000.0, 0.0005, 20, 1});
  for (double v : model.user_factors) EXPECT_LT(std::abs(v), 1e-3);
  for (double v : model.item_factors) EXPECT_LT(std::abs(v), 1e-3);
}

TEST(RsvdTest, DeterministicForSeed) {
  std::mt19937_64 rng(2);
  auto inst = testing::RandomInstance(rng, 8, 10, 6);
  const auto a = RsvdTrain(inst.split, {5, 0.05, 0.03, 10, 9});
  const auto b = RsvdTrain(inst.split, {5, 0.05, 0.03, 10, 9});
  EXPECT_EQ(a.user_factors, b.user_factors);
  EXPECT_EQ(a.item_factors, b.item_factors);
}

TEST(RsvdTest, DivergenceIsReported) {
  std::mt19937_64 rng(3);
  auto inst = testing::RandomInstance(rng, 8, 10, 6);
  EXPECT_THROW(RsvdTrain(inst.split, {5, 0.0, 50.0, 10, 1}), DivergenceError);
}

MFModel HandModel(double p, double q, double mean) {
  MFModel model;
  model.factors = 1;
  model.user_factors = {p};
  model.item_factors = {q};
  model.global_mean = mean;
  return model;
}

TEST(RmseTest, Examples) {
  const auto split = SplitDataset::FromParts({R(1, 1, 4)}, {});
  EXPECT_DOUBLE_EQ(Rmse(HandModel(1.0, 4.0, 4.0), split, {R(1, 1, 4)}), 0.0);
  EXPECT_DOUBLE_EQ(Rmse(HandModel(1.0, 3.0, 4.0), split, {R(1, 1, 4)}), 1.0);
  // Unknown ids predict the global mean.
  EXPECT_DOUBLE_EQ(Rmse(HandModel(1.0, 3.0, 2.0), split, {R(7, 1, 4)}), 2.0);
}

// One user, items 1..4 where user 1 rated item 4; raw predictions for items
// 1..3 are 2, 3, 4 via q.
TEST(MFScorerTest, PerUserMinMaxOverUnratedItems) {
  const auto split = SplitDataset::FromParts(
      {R(1, 4, 5), R(2, 1, 3), R(2, 2, 3), R(2, 3, 3)}, {});
  MFModel model;
  model.factors = 1;
  model.user_factors = {1.0, 1.0};
  model.item_factors = {2.0, 3.0, 4.0, 100.0};
  const MFScorer scorer(model, split);
  const Index u = split.UserIndex(1);
  EXPECT_DOUBLE_EQ(scorer.Score(u, 0), 0.0);
  EXPECT_DOUBLE_EQ(scorer.Score(u, 1), 0.5);
  EXPECT_DOUBLE_EQ(scorer.Score(u, 2), 1.0);
  EXPECT_EQ(scorer.UserRange(u), std::make_pair(2.0, 4.0));
}

TEST(MFScorerTest, EqualPredictionsScoreZero) {
  const auto split = SplitDataset::FromParts(
      {R(1, 3, 5), R(2, 1, 3), R(2, 2, 3)}, {});
  MFModel model;
  model.factors = 1;
  model.user_factors = {1.0, 1.0};
  model.item_factors = {2.0, 2.0, 9.0};
  const MFScorer scorer(model, split);
  EXPECT_EQ(scorer.Score(0, 0), 0.0);
  EXPECT_EQ(scorer.Score(0, 1), 0.0);
}

TEST(MFScorerTest, ArgmaxMatchesRawPredictions) {
  std::mt19937_64 rng(4);
  auto inst = testing::RandomInstance(rng, 10, 12, 6);
  const auto model = RsvdTrain(inst.split, {6, 0.05, 0.03, 20, 2});
  const MFScorer scorer(model, inst.split);
  for (Index u = 0; u < inst.split.num_users(); ++u) {
    const auto candidates =
        CandidateItems(inst.split, u, Protocol::kAllUnrated);
    const auto best_raw = *std::max_element(
        candidates.begin(), candidates.end(), [&](Index a, Index b) {
          return model.Predict(u, a) < model.Predict(u, b);
        });
    const auto best_scored = *std::max_element(
        candidates.begin(), candidates.end(), [&](Index a, Index b) {
          return scorer.Score(u, a) < scorer.Score(u, b);
        });
    EXPECT_EQ(best_raw, best_scored);
    for (Index i : candidates) {
      EXPECT_GE(scorer.Score(u, i), 0.0);
      EXPECT_LE(scorer.Score(u, i), 1.0);
    }
  }
}

TEST(ExternalScorerTest, NormalizesPerUserAndDefaultsToZero) {
  const auto split = SplitDataset::FromParts(
      {R(1, 9, 3), R(2, 1, 3), R(2, 2, 3), R(2, 3, 3)}, {});
  const auto dir = testing::TempDir("external_scores");
  std::ofstream(dir / "scores.csv") << "user,item,score\n1,1,0.9\n1,2,0.1\n"
                                       "1,2,0.3\n1,3,0.2\n42,1,7\n";
  const ExternalScorer scorer(dir / "scores.csv", split);
  const Index u = split.UserIndex(1);
  EXPECT_DOUBLE_EQ(scorer.Score(u, split.ItemIndex(1)), 1.0);
  // The duplicate (1, 2) keeps 0.3; min is item 3 at 0.2.
  EXPECT_DOUBLE_EQ(scorer.Score(u, split.ItemIndex(3)), 0.0);
  EXPECT_NEAR(scorer.Score(u, split.ItemIndex(2)), 0.1 / 0.7, 1e-12);
  EXPECT_EQ(scorer.Score(split.UserIndex(2), split.ItemIndex(1)), 0.0);

  std::ofstream(dir / "bad.csv") << "1,1,zz\n";
  EXPECT_THROW(ExternalScorer(dir / "bad.csv", split), ParseError);
}

TEST(CoverageTest, StatFormula) {
  std::vector<Rating> train;
  for (int u = 1; u <= 99; ++u) train.push_back(R(u, 1, 3));
  for (int u = 1; u <= 3; ++u) train.push_back(R(u, 2, 3));
  const auto split = SplitDataset::FromParts(train, {});
  const StatCoverage stat(ComputeItemStats(split));
  EXPECT_DOUBLE_EQ(stat.Score(split.ItemIndex(1)), 0.1);
  EXPECT_DOUBLE_EQ(stat.Score(split.ItemIndex(2)), 0.5);
  EXPECT_TRUE(stat.IsModular());
}

TEST(CoverageTest, DynReadsLiveFrequencyAndDecreases) {
  RecFrequency f(2);
  const DynCoverage dyn(f);
  EXPECT_EQ(dyn.Score(0), 1.0);
  f.Increment(0);
  EXPECT_NEAR(dyn.Score(0), 0.70710678118654752, 1e-15);
  double previous = dyn.Score(0);
  for (int k = 0; k < 20; ++k) {
    f.Increment(0);
    EXPECT_LT(dyn.Score(0), previous);
    previous = dyn.Score(0);
  }
  EXPECT_EQ(dyn.Score(1), 1.0);
  EXPECT_FALSE(dyn.IsModular());
}

TEST(CoverageTest, StatEqualsDynAtTrainFrequencies) {
  std::mt19937_64 rng(6);
  auto inst = testing::RandomInstance(rng, 7, 9, 5);
  const auto stats = ComputeItemStats(inst.split);
  RecFrequency f(inst.split.num_items());
  for (Index i = 0; i < inst.split.num_items(); ++i) {
    for (std::int64_t k = 0; k < stats.popularity[i]; ++k) f.Increment(i);
  }
  const StatCoverage stat(stats);
  const DynCoverage dyn(f);
  for (Index i = 0; i < inst.split.num_items(); ++i) {
    EXPECT_EQ(stat.Score(i), dyn.Score(i));
  }
}

TEST(CoverageTest, RandIsStablePerSeedAndUniform) {
  const RandCoverage a(100000, 5);
  const RandCoverage b(100000, 5);
  const RandCoverage c(100000, 6);
  double mean = 0.0;
  bool differs = false;
  for (Index i = 0; i < 100000; ++i) {
    EXPECT_EQ(a.Score(i), b.Score(i));
    EXPECT_GE(a.Score(i), 0.0);
    EXPECT_LT(a.Score(i), 1.0);
    differs = differs || a.Score(i) != c.Score(i);
    mean += a.Score(i);
  }
  mean /= 100000.0;
  EXPECT_TRUE(differs);
  EXPECT_GE(mean, 0.49);
  EXPECT_LE(mean, 0.51);
}

TEST(RandomScorerTest, DeterministicAndInRange) {
  const RandomScorer a(3);
  const RandomScorer b(3);
  for (Index u = 0; u < 20; ++u) {
    for (Index i = 0; i < 20; ++i) {
      EXPECT_EQ(a.Score(u, i), b.Score(u, i));
      EXPECT_GE(a.Score(u, i), 0.0);
      EXPECT_LT(a.Score(u, i), 1.0);
    }
  }
}

TEST(ModelPersistenceTest, RoundTripAndStaleHash) {
  std::mt19937_64 rng(7);
  auto inst = testing::RandomInstance(rng, 6, 8, 5);
  const auto model = RsvdTrain(inst.split, {3, 0.05, 0.03, 5, 1});
  const auto dir = testing::TempDir("model_roundtrip");
  ModelManifest manifest;
  manifest.options = model.options;
  manifest.split_hash = "h1";
  SaveModel(dir, inst.split, model, manifest);
  const auto loaded = LoadModel(dir, inst.split, "h1");
  EXPECT_EQ(loaded.model.user_factors, model.user_factors);
  EXPECT_EQ(loaded.model.item_factors, model.item_factors);
  EXPECT_EQ(loaded.model.global_mean, model.global_mean);
  EXPECT_THROW(LoadModel(dir, inst.split, "h2"), StaleArtifactError);
}

}  // namespace
}  // namespace ganc
