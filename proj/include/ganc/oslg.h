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

// Ordered sampling-based locally greedy (OSLG).
//
// A sample of users drawn from a kernel density estimate of theta is served
// sequentially in increasing theta against live dynamic coverage, storing a
// copy of the item frequencies after each user. Every other user is then
// served independently against the frozen frequencies of the sampled user
// closest in theta, which makes that phase order-free and parallel.

#ifndef GANC_OSLG_H_
#define GANC_OSLG_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ganc/dataset.h"
#include "ganc/frequency.h"
#include "ganc/greedy.h"
#include "ganc/preference.h"
#include "ganc/recommenders.h"

namespace ganc {

// Silverman's rule 1.06 * sd * n^(-1/5), floored at 1e-3.
double SilvermanBandwidth(std::span<const double> values);

// Draws `s` values from a Gaussian KDE of `theta` and maps each draw to the
// closest not-yet-selected position (ties to the smaller theta, then the
// smaller position). Returns the positions sorted by (theta, position).
// Throws ArgumentError when s exceeds theta.size().
std::vector<Index> KdeSample(std::span<const double> theta, std::size_t s,
                             std::uint64_t seed);

struct Snapshot {
  double theta = 0.0;
  Index user = 0;
  RecFrequency frequency;
};

// F(theta): frequency copies in non-decreasing theta order.
class SnapshotStore {
 public:
  void Add(double theta, Index user, RecFrequency frequency);

  std::size_t size() const { return entries_.size(); }
  const std::vector<Snapshot>& entries() const { return entries_; }

  // Entry minimizing |theta_s - theta|. Equidistant entries resolve to the
  // lower theta, and equal thetas to the earliest entry.
  const Snapshot& Nearest(double theta) const;

 private:
  std::vector<Snapshot> entries_;
};

struct OslgOptions {
  int n = 5;
  std::size_t sample_size = 500;
  std::uint64_t seed = 0;
  int workers = 1;
  Protocol protocol = Protocol::kAllUnrated;
  // When set, the non-sampled users are served in a shuffled order.
  std::optional<std::uint64_t> phase4_order_seed;
};

struct OslgResult {
  TopNCollection collection;
  std::vector<Index> sample;
  SnapshotStore snapshots;
  RecFrequency sequential_frequency;
  double sample_seconds = 0.0;
  double sequential_seconds = 0.0;
  double parallel_seconds = 0.0;
};

OslgResult Oslg(const SplitDataset& split, const PreferenceVector& prefs,
                const AccuracyScorer& arec, const OslgOptions& options);

}  // namespace ganc

#endif  // GANC_OSLG_H_
