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

// Rating ingestion, per-user train/test splitting and item popularity
// statistics.

#ifndef GANC_DATASET_H_
#define GANC_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ganc {

using UserId = std::int64_t;
using ItemId = std::int64_t;

// Dense position of a user or item inside a SplitDataset. Users and items
// are indexed in ascending id order, so comparing indices is the same as
// comparing ids.
using Index = std::uint32_t;

struct Rating {
  UserId user = 0;
  ItemId item = 0;
  double value = 0.0;
  std::optional<std::int64_t> timestamp;

  friend bool operator==(const Rating&, const Rating&) = default;
};

enum class RatingFormat { kTabSeparated, kDoubleColon, kCsv };

// Accepts "tab", "tsv", "tab_separated", "double_colon", "dat" and "csv".
RatingFormat ParseRatingFormat(std::string_view name);
std::string_view RatingFormatName(RatingFormat format);

// Parses `user<sep>item<sep>rating[<sep>timestamp]` lines. A csv stream may
// start with a `user,item,rating[,timestamp]` header. Duplicate (user, item)
// pairs keep the last occurrence. Ids must be integers.
std::vector<Rating> ParseRatings(std::istream& in, RatingFormat format,
                                 std::string_view source = "<stream>");
std::vector<Rating> LoadRatings(const std::filesystem::path& path,
                                RatingFormat format);

// Train/test partition with dense per-user and per-item indices.
//
// Invariants: train and test are disjoint as (user, item) pairs, every user
// has at least one train rating, and every test user and test item also
// appears in train.
class SplitDataset {
 public:
  SplitDataset() = default;

  // Indexes the given partition. Test ratings whose user or item does not
  // occur in train are dropped. Throws ArgumentError if a pair occurs in both.
  static SplitDataset FromParts(std::vector<Rating> train,
                                std::vector<Rating> test);

  const std::vector<Rating>& train() const { return train_; }
  const std::vector<Rating>& test() const { return test_; }

  std::size_t num_users() const { return user_ids_.size(); }
  std::size_t num_items() const { return item_ids_.size(); }

  UserId user_id(Index u) const { return user_ids_[u]; }
  ItemId item_id(Index i) const { return item_ids_[i]; }
  const std::vector<UserId>& user_ids() const { return user_ids_; }
  const std::vector<ItemId>& item_ids() const { return item_ids_; }

  std::optional<Index> FindUser(UserId id) const;
  std::optional<Index> FindItem(ItemId id) const;
  // Throws LookupError when the id is unknown.
  Index UserIndex(UserId id) const;
  Index ItemIndex(ItemId id) const;

  // I_u^R and the matching ratings, sorted by item index.
  std::span<const Index> train_items(Index u) const { return train_items_[u]; }
  std::span<const double> train_values(Index u) const {
    return train_values_[u];
  }
  // I_u^T and the matching ratings, sorted by item index.
  std::span<const Index> test_items(Index u) const { return test_items_[u]; }
  std::span<const double> test_values(Index u) const {
    return test_values_[u];
  }
  // U_i^R, sorted by user index.
  std::span<const Index> item_raters(Index i) const { return item_raters_[i]; }

  bool RatedInTrain(Index u, Index i) const;

 private:
  std::vector<Rating> train_;
  std::vector<Rating> test_;
  std::vector<UserId> user_ids_;
  std::vector<ItemId> item_ids_;
  std::vector<std::vector<Index>> train_items_;
  std::vector<std::vector<double>> train_values_;
  std::vector<std::vector<Index>> test_items_;
  std::vector<std::vector<double>> test_values_;
  std::vector<std::vector<Index>> item_raters_;
};

struct SplitOptions {
  double kappa = 0.5;
  int tau = 20;
  std::uint64_t seed = 0;
};

// Drops users with fewer than tau ratings, then sends ceil(kappa * n_u) of
// each remaining user's ratings to train. Every user is shuffled with its
// own generator seeded by (seed XOR user id).
SplitDataset SplitPerUser(const std::vector<Rating>& ratings,
                          const SplitOptions& options);

struct ItemStats {
  // f_i^R per item index.
  std::vector<std::int64_t> popularity;
  // Membership in L per item index.
  std::vector<bool> long_tail;
  std::int64_t total_train_ratings = 0;

  bool InLongTail(Index i) const { return long_tail[i]; }
  std::size_t LongTailSize() const;
};

// Sorts items by (popularity desc, id asc); the head is the shortest prefix
// holding at least 80% of the train ratings, the rest is the long tail.
ItemStats ComputeItemStats(const SplitDataset& split);

// Maps x to [0, 1] by (x - min) / (max - min). A constant input maps to all
// zeros. Throws ArgumentError on an empty input.
std::vector<double> MinMaxNormalize(std::span<const double> x);

// I_u^{T+}: the user's test items rated at least `threshold`.
std::vector<Index> RelevantTestItems(const SplitDataset& split, Index user,
                                     double threshold = 4.0);
std::vector<ItemId> RelevantTestItemsById(const SplitDataset& split,
                                          UserId user, double threshold = 4.0);

// Which items are ranked for a user when building a top-N list: every item
// the user has not rated in train, or only the user's own test items.
enum class Protocol { kAllUnrated, kRatedTestItems };

Protocol ParseProtocol(std::string_view name);
std::string_view ProtocolName(Protocol protocol);

// Candidate items for `user` under `protocol`, in ascending index order.
std::vector<Index> CandidateItems(const SplitDataset& split, Index user,
                                  Protocol protocol);

struct ActivityBin {
  double center = 0.0;          // in normalized activity units
  double mean_popularity = 0.0;  // mean over users of their average f_i^R
  std::size_t users = 0;
};

// Bins users by min-max normalized |I_u^R| and reports, per occupied bin,
// the mean of each user's average train-item popularity.
std::vector<ActivityBin> ActivityPopularityProfile(const SplitDataset& split,
                                                   int bins);

// Dataset-level statistics: |D|, |U|, |I| and density are measured on the
// ratings of users with at least tau ratings; the long-tail share is
// |L| / |I^R| on the train split.
struct DatasetSummary {
  std::size_t ratings = 0;
  std::size_t users = 0;
  std::size_t items = 0;
  double density_percent = 0.0;
  double long_tail_percent = 0.0;
};

DatasetSummary Summarize(const std::vector<Rating>& ratings, int tau,
                         const ItemStats& stats);

// Writes ratings in the generic csv layout `user,item,rating,timestamp`.
void WriteRatingsCsv(std::ostream& out, const std::vector<Rating>& ratings);

struct SplitManifest {
  SplitOptions options;
  std::string source;
  DatasetSummary summary;
  std::size_t train_ratings = 0;
  std::size_t test_ratings = 0;
  std::size_t users = 0;
  std::size_t items = 0;
  std::string split_hash;
};

// Persists train.csv, test.csv and split.json under `dir`. Returns the
// manifest with split_hash filled in.
SplitManifest SaveSplit(const std::filesystem::path& dir,
                        const SplitDataset& split, SplitManifest manifest);

struct LoadedSplit {
  SplitDataset split;
  SplitManifest manifest;
};

// Reads a directory written by SaveSplit. Throws StaleArtifactError when the
// csv files no longer hash to the manifest's split_hash.
LoadedSplit LoadSplit(const std::filesystem::path& dir);

}  // namespace ganc

#endif  // GANC_DATASET_H_
