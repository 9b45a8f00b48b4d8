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

#include "ganc/oslg.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <set>
#include <utility>

#include "ganc/error.h"
#include "ganc/parallel.h"

namespace ganc {
namespace {

double SecondsSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

double SilvermanBandwidth(std::span<const double> values) {
  constexpr double kFloor = 1e-3;
  if (values.size() < 2) return kFloor;
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double squares = 0.0;
  for (double v : values) squares += (v - mean) * (v - mean);
  const double sd = std::sqrt(squares / (n - 1.0));
  return std::max(kFloor, 1.06 * sd * std::pow(n, -0.2));
}

std::vector<Index> KdeSample(std::span<const double> theta, std::size_t s,
                             std::uint64_t seed) {
  if (s > theta.size()) {
    throw ArgumentError("sample size " + std::to_string(s) + " exceeds " +
                        std::to_string(theta.size()) + " users");
  }
  const double bandwidth = SilvermanBandwidth(theta);
  std::set<std::pair<double, Index>> remaining;
  for (Index k = 0; k < theta.size(); ++k) remaining.emplace(theta[k], k);

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, theta.size() - 1);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<Index> sample;
  sample.reserve(s);
  while (sample.size() < s) {
    const double draw = theta[pick(rng)] + bandwidth * noise(rng);
    auto above = remaining.lower_bound({draw, Index{0}});
    auto chosen = above;
    if (above == remaining.end()) {
      chosen = std::prev(above);
    } else if (above != remaining.begin()) {
      // The lower neighbour is the first entry of its theta run, so a tie in
      // distance keeps the smaller theta and then the smaller position.
      auto below = std::prev(above);
      below = remaining.lower_bound({below->first, Index{0}});
      if (draw - below->first <= above->first - draw) chosen = below;
    }
    sample.push_back(chosen->second);
    remaining.erase(chosen);
  }
  std::sort(sample.begin(), sample.end(), [&](Index a, Index b) {
    return std::pair(theta[a], a) < std::pair(theta[b], b);
  });
  return sample;
}

void SnapshotStore::Add(double theta, Index user, RecFrequency frequency) {
  if (!entries_.empty() && theta < entries_.back().theta) {
    throw ContractError("snapshots must arrive in non-decreasing theta");
  }
  entries_.push_back({theta, user, std::move(frequency)});
}

const Snapshot& SnapshotStore::Nearest(double theta) const {
  if (entries_.empty()) throw ContractError("no snapshots stored");
  const auto by_theta = [](const Snapshot& s, double t) { return s.theta < t; };
  auto above = std::lower_bound(entries_.begin(), entries_.end(), theta,
                                by_theta);
  if (above == entries_.end()) {
    const double last = entries_.back().theta;
    return *std::lower_bound(entries_.begin(), entries_.end(), last, by_theta);
  }
  if (above == entries_.begin()) return *above;
  const double lower = std::prev(above)->theta;
  if (theta - lower <= above->theta - theta) {
    return *std::lower_bound(entries_.begin(), entries_.end(), lower, by_theta);
  }
  return *above;
}

OslgResult Oslg(const SplitDataset& split, const PreferenceVector& prefs,
                const AccuracyScorer& arec, const OslgOptions& options) {
  if (options.n < 1) throw ArgumentError("n must be positive");
  if (prefs.theta.size() != split.num_users()) {
    throw ArgumentError("preference vector does not match the split's users");
  }
  OslgResult result;
  auto& collection = result.collection;
  collection.n = options.n;
  collection.protocol = options.protocol;
  collection.lists.resize(split.num_users());

  auto start = std::chrono::steady_clock::now();
  const auto eligible = EligibleUsers(split, options.n, options.protocol);
  std::vector<double> eligible_theta;
  eligible_theta.reserve(eligible.size());
  for (Index u : eligible) eligible_theta.push_back(prefs.theta[u]);
  std::vector<Index> sample;
  for (Index k : KdeSample(eligible_theta, options.sample_size, options.seed)) {
    sample.push_back(eligible[k]);
  }
  result.sample_seconds = SecondsSince(start);

  start = std::chrono::steady_clock::now();
  RecFrequency frequency(split.num_items());
  {
    const DynCoverage live(frequency);
    for (Index u : sample) {
      const auto candidates = CandidateItems(split, u, options.protocol);
      auto list = GreedyTopNUser(split, u, prefs.theta[u], arec, live,
                                 options.n, candidates);
      frequency.Add(list);
      result.snapshots.Add(prefs.theta[u], u, frequency);
      collection.lists[u] = std::move(list);
    }
  }
  result.sequential_seconds = SecondsSince(start);

  start = std::chrono::steady_clock::now();
  std::vector<bool> sampled(split.num_users(), false);
  for (Index u : sample) sampled[u] = true;
  std::vector<Index> rest;
  for (Index u : eligible) {
    if (!sampled[u]) rest.push_back(u);
  }
  if (options.phase4_order_seed) {
    std::mt19937_64 rng(*options.phase4_order_seed);
    std::shuffle(rest.begin(), rest.end(), rng);
  }
  if (!rest.empty() && result.snapshots.size() == 0) {
    throw ArgumentError("sample size must be positive when users remain");
  }
  ParallelFor(rest.size(), options.workers, [&](std::size_t k) {
    const Index u = rest[k];
    const auto& snapshot = result.snapshots.Nearest(prefs.theta[u]);
    const DynCoverage frozen(snapshot.frequency);
    const auto candidates = CandidateItems(split, u, options.protocol);
    collection.lists[u] = GreedyTopNUser(split, u, prefs.theta[u], arec,
                                         frozen, options.n, candidates);
  });
  result.parallel_seconds = SecondsSince(start);
  result.sample = std::move(sample);
  result.sequential_frequency = std::move(frequency);
  return result;
}

}  // namespace ganc
