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

#ifndef GANC_FREQUENCY_H_
#define GANC_FREQUENCY_H_

#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "ganc/dataset.h"

namespace ganc {

// f_i^A: how many top-N lists assigned so far contain each item.
class RecFrequency {
 public:
  RecFrequency() = default;
  explicit RecFrequency(std::size_t num_items) : counts_(num_items, 0) {}

  std::int64_t count(Index item) const { return counts_[item]; }
  std::size_t size() const { return counts_.size(); }
  std::span<const std::int64_t> counts() const { return counts_; }

  void Increment(Index item) { ++counts_[item]; }
  void Add(std::span<const Index> items) {
    for (Index i : items) ++counts_[i];
  }
  std::int64_t Total() const {
    return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0});
  }

  friend bool operator==(const RecFrequency&, const RecFrequency&) = default;

 private:
  std::vector<std::int64_t> counts_;
};

}  // namespace ganc

#endif  // GANC_FREQUENCY_H_
