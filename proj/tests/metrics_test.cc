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

#include "ganc/metrics.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "ganc/error.h"
#include "test_util.h"

namespace ganc {
namespace {

using testing::R;

// Ten items. User 1 has four relevant test items out of five, user 2 one,
// user 3 none.
SplitDataset ThreeUsers() {
  return SplitDataset::FromParts(
      {R(1, 10, 3), R(2, 1, 3), R(2, 2, 3), R(2, 3, 3), R(2, 4, 3),
       R(2, 5, 3), R(3, 6, 3), R(3, 7, 3), R(3, 8, 3), R(3, 9, 3)},
      {R(1, 1, 5), R(1, 2, 4), R(1, 3, 5), R(1, 4, 4), R(1, 5, 2),
       R(2, 6, 5)});
}

TopNCollection ThreeUserLists() {
  TopNCollection c;
  c.n = 5;
  c.lists = {{0, 1, 5, 6, 7}, {5, 6, 7, 8, 9}, {0, 1, 2, 3, 4}};
  return c;
}

TEST(GiniTest, KnownValues) {
  const std::vector<std::int64_t> uniform = {7, 7, 7, 7, 7};
  EXPECT_EQ(Gini(uniform), 0.0);
  const std::vector<std::int64_t> pair = {1, 3};
  EXPECT_DOUBLE_EQ(Gini(pair), 0.25);
  const std::vector<std::int64_t> spike = {0, 0, 0, 12};
  EXPECT_DOUBLE_EQ(Gini(spike), 0.75);
  const std::vector<std::int64_t> zeros = {0, 0};
  EXPECT_THROW(Gini(zeros), UndefinedMetricError);
  EXPECT_THROW(Gini(std::vector<std::int64_t>{}), UndefinedMetricError);
}

// Mean absolute difference form, independent of the sorted-rank formula.
double GiniByPairs(const std::vector<std::int64_t>& f) {
  double diff = 0.0;
  for (auto a : f) {
    for (auto b : f) diff += std::abs(static_cast<double>(a - b));
  }
  const double m = static_cast<double>(f.size());
  const double mean = std::accumulate(f.begin(), f.end(), 0.0) / m;
  return diff / (2.0 * m * m * mean);
}

TEST(GiniTest, MatchesPairwiseFormAndIsInvariant) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> count(0, 40);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::int64_t> f(3 + trial % 17);
    for (auto& v : f) v = count(rng);
    f[0] += 1;
    EXPECT_NEAR(Gini(f), GiniByPairs(f), 1e-12);
    auto scaled = f;
    for (auto& v : scaled) v *= 3;
    EXPECT_NEAR(Gini(scaled), Gini(f), 1e-12);
    auto shuffled = f;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(Gini(shuffled), Gini(f));
  }
}

TEST(PrecisionRecallTest, HandComputedExample) {
  const auto split = ThreeUsers();
  std::vector<UserPrecisionRecall> per_user;
  const auto pr = PrecisionRecallAtN(ThreeUserLists(), split, 4.0, &per_user);
  ASSERT_EQ(per_user.size(), 3u);
  EXPECT_EQ(per_user[0].user, 1);
  EXPECT_DOUBLE_EQ(per_user[0].precision, 0.4);
  EXPECT_DOUBLE_EQ(per_user[0].recall, 0.5);
  EXPECT_DOUBLE_EQ(per_user[1].recall, 1.0);
  EXPECT_DOUBLE_EQ(per_user[2].precision, 0.0);
  EXPECT_DOUBLE_EQ(per_user[2].recall, 0.0);
  EXPECT_EQ(pr.hits, 3u);
  EXPECT_EQ(pr.relevant, 5u);
  EXPECT_DOUBLE_EQ(pr.precision, 0.2);
  EXPECT_DOUBLE_EQ(pr.recall, 0.5);
  EXPECT_NEAR(pr.f_measure, 2.0 * 0.2 * 0.5 / 0.7, 1e-15);
  // Hit identity.
  EXPECT_NEAR(pr.precision * 5 * 3, static_cast<double>(pr.hits), 1e-12);
}

TEST(PrecisionRecallTest, SingleUserFMeasure) {
  const auto split = ThreeUsers();
  TopNCollection c;
  c.n = 5;
  c.protocol = Protocol::kRatedTestItems;
  c.lists = {{0, 1, 5, 6, 7}, {}, {}};
  const auto pr = PrecisionRecallAtN(c, split);
  EXPECT_DOUBLE_EQ(pr.precision, 0.4);
  EXPECT_DOUBLE_EQ(pr.recall, 0.5);
  EXPECT_NEAR(pr.f_measure, 0.4 / 0.9, 1e-15);
  c.lists = {{}, {}, {}};
  EXPECT_THROW(PrecisionRecallAtN(c, split), UndefinedMetricError);
}

TEST(PrecisionRecallTest, NoHitsGivesZeros) {
  const auto split = ThreeUsers();
  TopNCollection c;
  c.n = 5;
  c.lists = {{5, 6, 7, 8, 9}, {0, 1, 2, 3, 4}, {0, 1, 2, 3, 4}};
  const auto pr = PrecisionRecallAtN(c, split);
  EXPECT_EQ(pr.precision, 0.0);
  EXPECT_EQ(pr.recall, 0.0);
  EXPECT_EQ(pr.f_measure, 0.0);
}

TEST(StratRecallTest, BetaZeroIsMicroRecall) {
  const auto split = ThreeUsers();
  const auto stats = ComputeItemStats(split);
  const auto pr = PrecisionRecallAtN(ThreeUserLists(), split);
  EXPECT_NEAR(StratRecallAtN(ThreeUserLists(), split, stats, 0.0),
              static_cast<double>(pr.hits) / static_cast<double>(pr.relevant),
              1e-12);
  EXPECT_THROW(StratRecallAtN(ThreeUserLists(), split, stats, -0.1),
               ArgumentError);
}

TEST(StratRecallTest, RareHitsWeighMore) {
  // Item 1 has one train rating, item 2 has a hundred.
  std::vector<Rating> train;
  for (UserId u = 1; u <= 100; ++u) train.push_back(R(u, 2, 3));
  train.push_back(R(101, 1, 3));
  train.push_back(R(201, 3, 3));
  train.push_back(R(202, 3, 3));
  const auto split = SplitDataset::FromParts(
      train, {R(201, 1, 5), R(201, 2, 5), R(202, 1, 4), R(202, 2, 4)});
  const auto stats = ComputeItemStats(split);
  ASSERT_EQ(stats.popularity[0], 1);
  ASSERT_EQ(stats.popularity[1], 100);
  TopNCollection c;
  c.n = 1;
  c.lists.assign(split.num_users(), {0});
  c.lists[split.UserIndex(101)] = {1};
  const double expected = 2.0 / (2.0 + 2.0 * std::pow(100.0, -0.5));
  EXPECT_NEAR(StratRecallAtN(c, split, stats, 0.5), expected, 1e-12);
  EXPECT_NEAR(expected, 1.0 / 1.1, 1e-12);
  c.n = 2;
  c.lists.assign(split.num_users(), {0, 1});
  c.lists[split.UserIndex(101)] = {1, 2};
  for (UserId u = 1; u <= 100; ++u) c.lists[split.UserIndex(u)] = {0, 2};
  EXPECT_NEAR(StratRecallAtN(c, split, stats, 0.5), 1.0, 1e-12);
}

TEST(LtAccuracyTest, ShareOfTailSlots) {
  ItemStats stats;
  stats.popularity = {9, 9, 9, 9, 9, 1, 1, 1, 1, 1};
  stats.long_tail = {false, false, false, false, false,
                     true,  true,  true,  true,  true};
  TopNCollection c;
  c.n = 5;
  c.lists = {{5, 6, 7, 8, 9}, {0, 1, 2, 3, 4}};
  EXPECT_DOUBLE_EQ(LtAccuracyAtN(c, stats), 0.5);
  c.lists = {{5, 6, 7, 8, 9}, {9, 8, 7, 6, 5}};
  EXPECT_DOUBLE_EQ(LtAccuracyAtN(c, stats), 1.0);
}

TEST(CoverageTest, SharedListAndNesting) {
  const auto split = ThreeUsers();
  TopNCollection c;
  c.n = 3;
  c.lists.assign(3, {0, 1, 2});
  EXPECT_DOUBLE_EQ(CoverageAtN(c, split), 3.0 / 10.0);
  // Prefixes of longer lists never cover more.
  const auto full = ThreeUserLists();
  double previous = 0.0;
  for (int n = 1; n <= 5; ++n) {
    TopNCollection prefix;
    prefix.n = n;
    for (const auto& list : full.lists) {
      prefix.lists.emplace_back(list.begin(), list.begin() + n);
    }
    const double coverage = CoverageAtN(prefix, split);
    EXPECT_GE(coverage, previous);
    previous = coverage;
  }
  EXPECT_DOUBLE_EQ(previous, 1.0);
}

TEST(EvaluateTest, ChecksContractAndAggregates) {
  const auto split = ThreeUsers();
  const auto stats = ComputeItemStats(split);
  const auto c = ThreeUserLists();
  EXPECT_THROW(Evaluate(c, split, stats, Protocol::kRatedTestItems, 5),
               ContractError);
  EXPECT_THROW(Evaluate(c, split, stats, Protocol::kAllUnrated, 4),
               ContractError);
  const auto report = Evaluate(c, split, stats, Protocol::kAllUnrated, 5);
  EXPECT_EQ(report.users, 3u);
  EXPECT_DOUBLE_EQ(report.precision, 0.2);
  EXPECT_DOUBLE_EQ(report.coverage, 1.0);
  // Frequencies {2,2,1,1,1,2,2,2,1,1}: 5 ones and 5 twos.
  const std::vector<std::int64_t> f = {2, 2, 1, 1, 1, 2, 2, 2, 1, 1};
  EXPECT_DOUBLE_EQ(report.gini, GiniByPairs(f));
  auto bad = c;
  bad.lists[0][0] = 9;  // item 10 is in user 1's train set
  EXPECT_THROW(Evaluate(bad, split, stats, Protocol::kAllUnrated, 5),
               ContractError);
}

TEST(EvaluateTest, EmptyTestSetIsUndefined) {
  const auto split = SplitDataset::FromParts(
      {R(1, 1, 3), R(2, 2, 3), R(2, 3, 3)}, {});
  const auto stats = ComputeItemStats(split);
  TopNCollection c;
  c.n = 1;
  c.lists = {{1}, {0}};
  EXPECT_THROW(Evaluate(c, split, stats, Protocol::kAllUnrated, 1),
               UndefinedMetricError);
}

TEST(ReportTest, JsonRoundTripAndCsv) {
  const auto split = ThreeUsers();
  const auto stats = ComputeItemStats(split);
  auto report =
      Evaluate(ThreeUserLists(), split, stats, Protocol::kAllUnrated, 5);
  const std::string text = ReportToJson(report, "abc");
  std::string hash;
  const auto back = ReportFromJson(text, &hash);
  EXPECT_EQ(hash, "abc");
  EXPECT_EQ(PerUserCsv(report).substr(0, 22), "user,precision,recall\n");
  report.per_user.clear();
  EXPECT_EQ(back, report);
  const auto csv = ReportToCsv(report);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
  EXPECT_THROW(ReportFromJson("{\"n\": 5}"), DataError);
  EXPECT_THROW(ReportFromJson("not json"), DataError);
}

}  // namespace
}  // namespace ganc
