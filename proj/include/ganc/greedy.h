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

// The per-user value function v_u(P_u) = (1 - theta_u) a(P_u) + theta_u c(P_u)
// and the greedy builders that maximize it.

#ifndef GANC_GREEDY_H_
#define GANC_GREEDY_H_

#include <filesystem>
#include <span>
#include <vector>

#include "ganc/dataset.h"
#include "ganc/frequency.h"
#include "ganc/preference.h"
#include "ganc/recommenders.h"

namespace ganc {

struct TopNCollection {
  int n = 0;
  Protocol protocol = Protocol::kAllUnrated;
  // P_u per user index, in selection order. An empty list marks a user that
  // was skipped (only under the rated-test-items protocol).
  std::vector<std::vector<Index>> lists;

  std::size_t NumAssigned() const;
  friend bool operator==(const TopNCollection&, const TopNCollection&) = default;
};

// Throws ContractError unless every non-empty list has exactly n distinct
// items, none rated by the user in train. Under all_unrated every user must
// have a list.
void ValidateCollection(const TopNCollection& collection,
                        const SplitDataset& split);

RecFrequency FrequenciesOf(const TopNCollection& collection,
                           std::size_t num_items);

// (1 - theta) sum a(u, i) + theta sum c(i) over `items`. Throws
// ContractError when an item is in the user's train set.
double UserValue(const SplitDataset& split, Index user,
                 std::span<const Index> items, double theta,
                 const AccuracyScorer& arec, const CoverageScorer& crec);

// n greedy steps, each taking the candidate with the largest marginal gain
// (1 - theta) a(u, i) + theta c(i); ties go to the smaller item id. When
// `gains` is given it receives the gain of each step.
//
// Throws InfeasibleError with fewer than n candidates and ContractError if a
// candidate is one of the user's train items.
std::vector<Index> GreedyTopNUser(const SplitDataset& split, Index user,
                                  double theta, const AccuracyScorer& arec,
                                  const CoverageScorer& crec, int n,
                                  std::span<const Index> candidates,
                                  std::vector<double>* gains = nullptr);

enum class UserOrder { kArbitrary, kIncreasingTheta };

struct LocallyGreedyResult {
  TopNCollection collection;
  RecFrequency frequency;
};

// Fully sequential locally greedy with dynamic coverage: users are visited in
// index order (kArbitrary) or by (theta, index), each gets a greedy list
// against the live frequencies, which are then incremented.
LocallyGreedyResult LocallyGreedyFull(const SplitDataset& split,
                                      const PreferenceVector& prefs,
                                      const AccuracyScorer& arec, int n,
                                      UserOrder order,
                                      Protocol protocol = Protocol::kAllUnrated);

// Independent per-user greedy for a modular coverage scorer, parallel over
// users. Throws ContractError for a non-modular scorer.
TopNCollection IndependentGreedy(const SplitDataset& split,
                                 const PreferenceVector& prefs,
                                 const AccuracyScorer& arec,
                                 const CoverageScorer& crec, int n,
                                 Protocol protocol = Protocol::kAllUnrated,
                                 int workers = 1);

// Users that receive a list under `protocol`: everyone for all_unrated, and
// users with at least n test items for rated_test_items.
std::vector<Index> EligibleUsers(const SplitDataset& split, int n,
                                 Protocol protocol);

// topn.csv: `user,rank,item` with rank 1..n.
void SaveTopN(const std::filesystem::path& path, const SplitDataset& split,
              const TopNCollection& collection);
TopNCollection LoadTopN(const std::filesystem::path& path,
                        const SplitDataset& split, int n, Protocol protocol);

}  // namespace ganc

#endif  // GANC_GREEDY_H_
