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

// Exhaustive and property oracles for small instances.
//
// The collection value over user-item pairs is
//
//   v(P) = sum_u (1 - theta_u) sum_{i in P_u} a(u, i)
//        + sum_i sum_{j = 1..f_i} theta_(j) / sqrt(j)
//
// where theta_(1) >= theta_(2) >= ... are the preferences of the f_i users
// holding item i. With equal thetas this is exactly the running dynamic
// coverage sum_u theta sum_i 1 / sqrt(1 + f_i before u). Sorting holders by
// decreasing theta pairs the largest discount with the keenest user, which
// keeps v monotone and submodular for arbitrary thetas.

#ifndef GANC_ORACLE_H_
#define GANC_ORACLE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "ganc/dataset.h"
#include "ganc/recommenders.h"

namespace ganc {

// `lists[u]` is the (unordered) item set of user u. Items rated by the user
// in train throw ContractError.
double CollectionValue(const SplitDataset& split, std::span<const double> theta,
                       const AccuracyScorer& arec,
                       const std::vector<std::vector<Index>>& lists);

struct BruteForceResult {
  double value = 0.0;
  std::vector<std::vector<Index>> lists;
};

// Enumerates every collection of n-subsets of each user's unrated items.
// Refuses (ArgumentError) instances with more than 4 users, 8 items or n > 2.
BruteForceResult BruteForceOptimal(const SplitDataset& split,
                                   std::span<const double> theta,
                                   const AccuracyScorer& arec, int n);

struct SubmodularityReport {
  int trials = 0;
  int violations = 0;
  bool ok() const { return violations == 0; }
};

// Draws random chains A subset B of user-item pairs (seen pairs excluded) and
// a pair x outside B, and checks v(A+x) - v(A) >= v(B+x) - v(B) >= 0 up to
// 1e-12.
SubmodularityReport SubmodularityCheck(const SplitDataset& split,
                                       std::span<const double> theta,
                                       const AccuracyScorer& arec, int trials,
                                       std::uint64_t seed);

}  // namespace ganc

#endif  // GANC_ORACLE_H_
