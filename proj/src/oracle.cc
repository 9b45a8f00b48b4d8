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

#include "ganc/oracle.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <utility>

#include "ganc/error.h"

namespace ganc {
namespace {

// All k-subsets of `items`, in lexicographic order.
std::vector<std::vector<Index>> Subsets(const std::vector<Index>& items,
                                        int k) {
  std::vector<std::vector<Index>> out;
  std::vector<Index> current;
  std::function<void(std::size_t)> recurse = [&](std::size_t start) {
    if (current.size() == static_cast<std::size_t>(k)) {
      out.push_back(current);
      return;
    }
    for (std::size_t p = start; p < items.size(); ++p) {
      current.push_back(items[p]);
      recurse(p + 1);
      current.pop_back();
    }
  };
  recurse(0);
  return out;
}

using PairSet = std::vector<std::pair<Index, Index>>;

std::vector<std::vector<Index>> ToLists(const PairSet& pairs,
                                        std::size_t num_users) {
  std::vector<std::vector<Index>> lists(num_users);
  for (const auto& [u, i] : pairs) lists[u].push_back(i);
  return lists;
}

}  // namespace

double CollectionValue(const SplitDataset& split, std::span<const double> theta,
                       const AccuracyScorer& arec,
                       const std::vector<std::vector<Index>>& lists) {
  if (theta.size() != split.num_users() || lists.size() != split.num_users()) {
    throw ArgumentError("collection and preferences must cover every user");
  }
  double accuracy = 0.0;
  std::vector<std::vector<double>> holders(split.num_items());
  for (Index u = 0; u < lists.size(); ++u) {
    for (Index i : lists[u]) {
      if (split.RatedInTrain(u, i)) {
        throw ContractError("item " + std::to_string(split.item_id(i)) +
                            " is in the train set of user " +
                            std::to_string(split.user_id(u)));
      }
      accuracy += (1.0 - theta[u]) * arec.Score(u, i);
      holders[i].push_back(theta[u]);
    }
  }
  double coverage = 0.0;
  for (auto& h : holders) {
    std::sort(h.begin(), h.end(), std::greater<>());
    for (std::size_t j = 0; j < h.size(); ++j) {
      coverage += h[j] / std::sqrt(static_cast<double>(j + 1));
    }
  }
  return accuracy + coverage;
}

BruteForceResult BruteForceOptimal(const SplitDataset& split,
                                   std::span<const double> theta,
                                   const AccuracyScorer& arec, int n) {
  if (split.num_users() > 4 || split.num_items() > 8 || n > 2 || n < 1) {
    throw ArgumentError(
        "brute force is limited to 4 users, 8 items and n in {1, 2}");
  }
  std::vector<std::vector<std::vector<Index>>> options(split.num_users());
  for (Index u = 0; u < split.num_users(); ++u) {
    options[u] = Subsets(CandidateItems(split, u, Protocol::kAllUnrated), n);
    if (options[u].empty()) {
      throw InfeasibleError("user " + std::to_string(split.user_id(u)) +
                            " has fewer than n unrated items");
    }
  }
  BruteForceResult best;
  best.value = -1.0;
  std::vector<std::vector<Index>> current(split.num_users());
  std::function<void(Index)> recurse = [&](Index u) {
    if (u == split.num_users()) {
      const double value = CollectionValue(split, theta, arec, current);
      if (value > best.value) {
        best.value = value;
        best.lists = current;
      }
      return;
    }
    for (const auto& subset : options[u]) {
      current[u] = subset;
      recurse(u + 1);
    }
  };
  recurse(0);
  return best;
}

SubmodularityReport SubmodularityCheck(const SplitDataset& split,
                                       std::span<const double> theta,
                                       const AccuracyScorer& arec, int trials,
                                       std::uint64_t seed) {
  PairSet ground;
  for (Index u = 0; u < split.num_users(); ++u) {
    for (Index i : CandidateItems(split, u, Protocol::kAllUnrated)) {
      ground.emplace_back(u, i);
    }
  }
  SubmodularityReport report;
  if (ground.empty()) return report;
  constexpr double kSlack = 1e-12;
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  const auto value = [&](const PairSet& pairs) {
    return CollectionValue(split, theta, arec,
                           ToLists(pairs, split.num_users()));
  };
  for (int t = 0; t < trials; ++t) {
    auto order = ground;
    std::shuffle(order.begin(), order.end(), rng);
    // The first pair is the probe x; B and A are drawn from the rest.
    const auto x = order.front();
    PairSet a;
    PairSet b;
    for (std::size_t k = 1; k < order.size(); ++k) {
      if (!coin(rng)) continue;
      b.push_back(order[k]);
      if (coin(rng)) a.push_back(order[k]);
    }
    const double va = value(a);
    const double vb = value(b);
    a.push_back(x);
    b.push_back(x);
    const double gain_a = value(a) - va;
    const double gain_b = value(b) - vb;
    ++report.trials;
    if (gain_a < gain_b - kSlack || gain_b < -kSlack) ++report.violations;
  }
  return report;
}

}  // namespace ganc
