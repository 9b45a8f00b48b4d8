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

#include "ganc/greedy.h"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ganc/error.h"
#include "ganc/io.h"
#include "ganc/parallel.h"

namespace ganc {

std::size_t TopNCollection::NumAssigned() const {
  return static_cast<std::size_t>(std::count_if(
      lists.begin(), lists.end(), [](const auto& l) { return !l.empty(); }));
}

void ValidateCollection(const TopNCollection& collection,
                        const SplitDataset& split) {
  if (collection.lists.size() != split.num_users()) {
    throw ContractError("collection does not cover the split's users");
  }
  for (Index u = 0; u < split.num_users(); ++u) {
    const auto& list = collection.lists[u];
    const auto user = std::to_string(split.user_id(u));
    if (list.empty()) {
      if (collection.protocol == Protocol::kAllUnrated) {
        throw ContractError("user " + user + " has no list");
      }
      continue;
    }
    if (list.size() != static_cast<std::size_t>(collection.n)) {
      throw ContractError("user " + user + " has " +
                          std::to_string(list.size()) + " items, expected " +
                          std::to_string(collection.n));
    }
    auto sorted = list;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ContractError("user " + user + " has a repeated item");
    }
    for (Index i : list) {
      if (i >= split.num_items()) {
        throw ContractError("user " + user + " has an item outside I^R");
      }
      if (split.RatedInTrain(u, i)) {
        throw ContractError("user " + user + " is recommended train item " +
                            std::to_string(split.item_id(i)));
      }
    }
  }
}

RecFrequency FrequenciesOf(const TopNCollection& collection,
                           std::size_t num_items) {
  RecFrequency frequency(num_items);
  for (const auto& list : collection.lists) frequency.Add(list);
  return frequency;
}

double UserValue(const SplitDataset& split, Index user,
                 std::span<const Index> items, double theta,
                 const AccuracyScorer& arec, const CoverageScorer& crec) {
  double accuracy = 0.0;
  double coverage = 0.0;
  for (Index i : items) {
    if (split.RatedInTrain(user, i)) {
      throw ContractError("item " + std::to_string(split.item_id(i)) +
                          " is in the train set of user " +
                          std::to_string(split.user_id(user)));
    }
    accuracy += arec.Score(user, i);
    coverage += crec.Score(i);
  }
  return (1.0 - theta) * accuracy + theta * coverage;
}

std::vector<Index> GreedyTopNUser(const SplitDataset& split, Index user,
                                  double theta, const AccuracyScorer& arec,
                                  const CoverageScorer& crec, int n,
                                  std::span<const Index> candidates,
                                  std::vector<double>* gains) {
  if (n < 1) throw ArgumentError("n must be positive");
  if (candidates.size() < static_cast<std::size_t>(n)) {
    throw InfeasibleError("user " + std::to_string(split.user_id(user)) +
                          " has " + std::to_string(candidates.size()) +
                          " candidate items, needs " + std::to_string(n));
  }
  // Items are distinct and frequencies only change between users, so each
  // candidate's marginal gain stays fixed during this user's build.
  std::vector<double> gain(candidates.size());
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const Index i = candidates[k];
    if (split.RatedInTrain(user, i)) {
      throw ContractError("candidate item " + std::to_string(split.item_id(i)) +
                          " is in the train set of user " +
                          std::to_string(split.user_id(user)));
    }
    gain[k] = (1.0 - theta) * arec.Score(user, i) + theta * crec.Score(i);
  }
  std::vector<bool> taken(candidates.size(), false);
  std::vector<Index> chosen;
  chosen.reserve(static_cast<std::size_t>(n));
  if (gains) gains->clear();
  for (int step = 0; step < n; ++step) {
    std::size_t best = candidates.size();
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      if (taken[k]) continue;
      if (best == candidates.size() || gain[k] > gain[best] ||
          (gain[k] == gain[best] && candidates[k] < candidates[best])) {
        best = k;
      }
    }
    taken[best] = true;
    chosen.push_back(candidates[best]);
    if (gains) gains->push_back(gain[best]);
  }
  return chosen;
}

std::vector<Index> EligibleUsers(const SplitDataset& split, int n,
                                 Protocol protocol) {
  std::vector<Index> users;
  users.reserve(split.num_users());
  for (Index u = 0; u < split.num_users(); ++u) {
    if (protocol == Protocol::kRatedTestItems &&
        split.test_items(u).size() < static_cast<std::size_t>(n)) {
      continue;
    }
    users.push_back(u);
  }
  return users;
}

LocallyGreedyResult LocallyGreedyFull(const SplitDataset& split,
                                      const PreferenceVector& prefs,
                                      const AccuracyScorer& arec, int n,
                                      UserOrder order, Protocol protocol) {
  auto users = EligibleUsers(split, n, protocol);
  if (order == UserOrder::kIncreasingTheta) {
    std::stable_sort(users.begin(), users.end(), [&](Index a, Index b) {
      return prefs.theta[a] < prefs.theta[b];
    });
  }
  LocallyGreedyResult result;
  result.collection.n = n;
  result.collection.protocol = protocol;
  result.collection.lists.resize(split.num_users());
  result.frequency = RecFrequency(split.num_items());
  const DynCoverage coverage(result.frequency);
  for (Index u : users) {
    const auto candidates = CandidateItems(split, u, protocol);
    auto list = GreedyTopNUser(split, u, prefs.theta[u], arec, coverage, n,
                               candidates);
    result.frequency.Add(list);
    result.collection.lists[u] = std::move(list);
  }
  return result;
}

TopNCollection IndependentGreedy(const SplitDataset& split,
                                 const PreferenceVector& prefs,
                                 const AccuracyScorer& arec,
                                 const CoverageScorer& crec, int n,
                                 Protocol protocol, int workers) {
  if (!crec.IsModular()) {
    throw ContractError(crec.Name() +
                        " coverage couples users; use OSLG or locally greedy");
  }
  const auto users = EligibleUsers(split, n, protocol);
  TopNCollection collection;
  collection.n = n;
  collection.protocol = protocol;
  collection.lists.resize(split.num_users());
  ParallelFor(users.size(), workers, [&](std::size_t k) {
    const Index u = users[k];
    const auto candidates = CandidateItems(split, u, protocol);
    collection.lists[u] =
        GreedyTopNUser(split, u, prefs.theta[u], arec, crec, n, candidates);
  });
  return collection;
}

void SaveTopN(const std::filesystem::path& path, const SplitDataset& split,
              const TopNCollection& collection) {
  std::ostringstream out;
  out << "user,rank,item\n";
  for (Index u = 0; u < collection.lists.size(); ++u) {
    const auto& list = collection.lists[u];
    for (std::size_t r = 0; r < list.size(); ++r) {
      out << split.user_id(u) << ',' << r + 1 << ',' << split.item_id(list[r])
          << '\n';
    }
  }
  WriteFileAtomic(path, out.str());
}

TopNCollection LoadTopN(const std::filesystem::path& path,
                        const SplitDataset& split, int n, Protocol protocol) {
  TopNCollection collection;
  collection.n = n;
  collection.protocol = protocol;
  collection.lists.resize(split.num_users());
  std::vector<std::vector<std::pair<std::int64_t, Index>>> ranked(
      split.num_users());
  std::istringstream in(ReadFile(path));
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line_number == 1 || Trim(line).empty()) continue;
    const auto fields = SplitFields(Trim(line), ",");
    std::int64_t user = 0;
    std::int64_t rank = 0;
    std::int64_t item = 0;
    if (fields.size() != 3 || !ParseInt64(fields[0], user) ||
        !ParseInt64(fields[1], rank) || !ParseInt64(fields[2], item)) {
      throw ParseError(path.string(), line_number, "expected user,rank,item");
    }
    ranked[split.UserIndex(user)].emplace_back(rank, split.ItemIndex(item));
  }
  for (Index u = 0; u < split.num_users(); ++u) {
    auto& rows = ranked[u];
    std::sort(rows.begin(), rows.end());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].first != static_cast<std::int64_t>(r) + 1) {
        throw DataError(path.string() + ": ranks of user " +
                        std::to_string(split.user_id(u)) + " are not 1..n");
      }
      collection.lists[u].push_back(rows[r].second);
    }
  }
  ValidateCollection(collection, split);
  return collection;
}

}  // namespace ganc
