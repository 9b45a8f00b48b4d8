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

#include "ganc/dataset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <utility>

#include "ganc/error.h"
#include "ganc/io.h"
#include "json.hpp"

namespace ganc {
namespace {

std::string_view Separator(RatingFormat format) {
  switch (format) {
    case RatingFormat::kTabSeparated:
      return "\t";
    case RatingFormat::kDoubleColon:
      return "::";
    case RatingFormat::kCsv:
      return ",";
  }
  return ",";
}

bool LessByUserItem(const Rating& a, const Rating& b) {
  return std::tie(a.user, a.item) < std::tie(b.user, b.item);
}

template <typename Id>
std::optional<Index> FindSorted(const std::vector<Id>& ids, Id id) {
  auto it = std::lower_bound(ids.begin(), ids.end(), id);
  if (it == ids.end() || *it != id) return std::nullopt;
  return static_cast<Index>(it - ids.begin());
}

}  // namespace

RatingFormat ParseRatingFormat(std::string_view name) {
  if (name == "tab" || name == "tsv" || name == "tab_separated") {
    return RatingFormat::kTabSeparated;
  }
  if (name == "double_colon" || name == "dat") return RatingFormat::kDoubleColon;
  if (name == "csv") return RatingFormat::kCsv;
  throw ArgumentError("unknown rating format '" + std::string(name) + "'");
}

std::string_view RatingFormatName(RatingFormat format) {
  switch (format) {
    case RatingFormat::kTabSeparated:
      return "tab_separated";
    case RatingFormat::kDoubleColon:
      return "double_colon";
    case RatingFormat::kCsv:
      return "csv";
  }
  return "csv";
}

std::vector<Rating> ParseRatings(std::istream& in, RatingFormat format,
                                 std::string_view source) {
  const std::string src(source);
  const auto separator = Separator(format);
  std::vector<Rating> parsed;
  std::map<std::pair<UserId, ItemId>, std::size_t> last_seen;
  std::string line;
  std::size_t line_number = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_number;
    const auto text = Trim(line);
    if (text.empty()) continue;
    const auto fields = SplitFields(text, separator);
    const bool is_first = std::exchange(first_content_line, false);
    Rating rating;
    if (fields.size() < 3 || fields.size() > 4) {
      throw ParseError(src, line_number,
                       "expected user, item, rating[, timestamp]");
    }
    if (!ParseInt64(fields[0], rating.user)) {
      if (is_first && format == RatingFormat::kCsv) continue;  // header
      throw ParseError(src, line_number, "bad user id");
    }
    if (!ParseInt64(fields[1], rating.item)) {
      throw ParseError(src, line_number, "bad item id");
    }
    if (!ParseDouble(fields[2], rating.value) || !std::isfinite(rating.value) ||
        rating.value < 0.0) {
      throw ParseError(src, line_number, "bad rating value");
    }
    if (fields.size() == 4 && !Trim(fields[3]).empty()) {
      std::int64_t ts = 0;
      if (!ParseInt64(fields[3], ts)) {
        throw ParseError(src, line_number, "bad timestamp");
      }
      rating.timestamp = ts;
    }
    last_seen[{rating.user, rating.item}] = parsed.size();
    parsed.push_back(rating);
  }
  if (parsed.empty()) throw EmptyDatasetError(src + ": no ratings");
  std::vector<Rating> ratings;
  ratings.reserve(last_seen.size());
  for (std::size_t k = 0; k < parsed.size(); ++k) {
    if (last_seen.at({parsed[k].user, parsed[k].item}) == k) {
      ratings.push_back(parsed[k]);
    }
  }
  return ratings;
}

std::vector<Rating> LoadRatings(const std::filesystem::path& path,
                                RatingFormat format) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return ParseRatings(in, format, path.string());
}

SplitDataset SplitDataset::FromParts(std::vector<Rating> train,
                                     std::vector<Rating> test) {
  SplitDataset split;
  std::sort(train.begin(), train.end(), LessByUserItem);
  std::sort(test.begin(), test.end(), LessByUserItem);
  for (std::size_t k = 1; k < train.size(); ++k) {
    if (train[k - 1].user == train[k].user &&
        train[k - 1].item == train[k].item) {
      throw ArgumentError("duplicate train pair (" +
                          std::to_string(train[k].user) + ", " +
                          std::to_string(train[k].item) + ")");
    }
  }
  for (const auto& r : train) {
    split.user_ids_.push_back(r.user);
    split.item_ids_.push_back(r.item);
  }
  std::sort(split.user_ids_.begin(), split.user_ids_.end());
  split.user_ids_.erase(
      std::unique(split.user_ids_.begin(), split.user_ids_.end()),
      split.user_ids_.end());
  std::sort(split.item_ids_.begin(), split.item_ids_.end());
  split.item_ids_.erase(
      std::unique(split.item_ids_.begin(), split.item_ids_.end()),
      split.item_ids_.end());

  const auto num_users = split.user_ids_.size();
  const auto num_items = split.item_ids_.size();
  split.train_items_.resize(num_users);
  split.train_values_.resize(num_users);
  split.test_items_.resize(num_users);
  split.test_values_.resize(num_users);
  split.item_raters_.resize(num_items);

  // train is sorted by (user, item), so per-user lists come out sorted.
  for (const auto& r : train) {
    const Index u = *split.FindUser(r.user);
    const Index i = *split.FindItem(r.item);
    split.train_items_[u].push_back(i);
    split.train_values_[u].push_back(r.value);
    split.item_raters_[i].push_back(u);
  }

  std::vector<Rating> kept_test;
  kept_test.reserve(test.size());
  for (const auto& r : test) {
    const auto u = split.FindUser(r.user);
    const auto i = split.FindItem(r.item);
    if (!u || !i) continue;
    if (split.RatedInTrain(*u, *i)) {
      throw ArgumentError("pair (" + std::to_string(r.user) + ", " +
                          std::to_string(r.item) + ") is in train and test");
    }
    auto& items = split.test_items_[*u];
    if (!items.empty() && items.back() == *i) {
      throw ArgumentError("duplicate test pair (" + std::to_string(r.user) +
                          ", " + std::to_string(r.item) + ")");
    }
    items.push_back(*i);
    split.test_values_[*u].push_back(r.value);
    kept_test.push_back(r);
  }
  split.train_ = std::move(train);
  split.test_ = std::move(kept_test);
  return split;
}

std::optional<Index> SplitDataset::FindUser(UserId id) const {
  return FindSorted(user_ids_, id);
}

std::optional<Index> SplitDataset::FindItem(ItemId id) const {
  return FindSorted(item_ids_, id);
}

Index SplitDataset::UserIndex(UserId id) const {
  if (auto u = FindUser(id)) return *u;
  throw LookupError("unknown user " + std::to_string(id));
}

Index SplitDataset::ItemIndex(ItemId id) const {
  if (auto i = FindItem(id)) return *i;
  throw LookupError("unknown item " + std::to_string(id));
}

bool SplitDataset::RatedInTrain(Index u, Index i) const {
  const auto& items = train_items_[u];
  return std::binary_search(items.begin(), items.end(), i);
}

SplitDataset SplitPerUser(const std::vector<Rating>& ratings,
                          const SplitOptions& options) {
  if (!(options.kappa > 0.0 && options.kappa < 1.0)) {
    throw ArgumentError("kappa must lie in (0, 1)");
  }
  if (options.tau < 1) throw ArgumentError("tau must be at least 1");

  std::map<UserId, std::vector<Rating>> by_user;
  for (const auto& r : ratings) by_user[r.user].push_back(r);

  std::vector<Rating> train;
  std::vector<Rating> test;
  for (auto& [user, list] : by_user) {
    if (list.size() < static_cast<std::size_t>(options.tau)) continue;
    std::sort(list.begin(), list.end(), LessByUserItem);
    std::mt19937_64 rng(options.seed ^ static_cast<std::uint64_t>(user));
    std::shuffle(list.begin(), list.end(), rng);
    // The epsilon keeps products such as 0.7 * 10 from rounding up to 8.
    const auto n_train = static_cast<std::size_t>(std::ceil(
        options.kappa * static_cast<double>(list.size()) - 1e-9));
    for (std::size_t k = 0; k < list.size(); ++k) {
      (k < n_train ? train : test).push_back(list[k]);
    }
  }
  if (train.empty()) {
    throw EmptyDatasetError("no user has at least tau = " +
                            std::to_string(options.tau) + " ratings");
  }
  return SplitDataset::FromParts(std::move(train), std::move(test));
}

std::size_t ItemStats::LongTailSize() const {
  return static_cast<std::size_t>(
      std::count(long_tail.begin(), long_tail.end(), true));
}

ItemStats ComputeItemStats(const SplitDataset& split) {
  if (split.train().empty()) throw EmptyDatasetError("empty train set");
  ItemStats stats;
  const auto num_items = split.num_items();
  stats.popularity.resize(num_items);
  for (Index i = 0; i < num_items; ++i) {
    stats.popularity[i] = static_cast<std::int64_t>(split.item_raters(i).size());
    stats.total_train_ratings += stats.popularity[i];
  }
  std::vector<Index> order(num_items);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return stats.popularity[a] > stats.popularity[b];
  });
  stats.long_tail.assign(num_items, true);
  std::int64_t cumulative = 0;
  for (Index i : order) {
    stats.long_tail[i] = false;
    cumulative += stats.popularity[i];
    if (5 * cumulative >= 4 * stats.total_train_ratings) break;
  }
  return stats;
}

std::vector<double> MinMaxNormalize(std::span<const double> x) {
  if (x.empty()) throw ArgumentError("cannot normalize an empty vector");
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  const double min = *lo;
  const double range = *hi - *lo;
  std::vector<double> out(x.size(), 0.0);
  if (range > 0.0) {
    for (std::size_t k = 0; k < x.size(); ++k) {
      out[k] = std::clamp((x[k] - min) / range, 0.0, 1.0);
    }
  }
  return out;
}

std::vector<Index> RelevantTestItems(const SplitDataset& split, Index user,
                                     double threshold) {
  const auto items = split.test_items(user);
  const auto values = split.test_values(user);
  std::vector<Index> relevant;
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (values[k] >= threshold) relevant.push_back(items[k]);
  }
  return relevant;
}

std::vector<ItemId> RelevantTestItemsById(const SplitDataset& split,
                                          UserId user, double threshold) {
  std::vector<ItemId> ids;
  for (Index i : RelevantTestItems(split, split.UserIndex(user), threshold)) {
    ids.push_back(split.item_id(i));
  }
  return ids;
}

Protocol ParseProtocol(std::string_view name) {
  if (name == "all_unrated") return Protocol::kAllUnrated;
  if (name == "rated_test_items") return Protocol::kRatedTestItems;
  throw ArgumentError("unknown protocol '" + std::string(name) + "'");
}

std::string_view ProtocolName(Protocol protocol) {
  return protocol == Protocol::kAllUnrated ? "all_unrated" : "rated_test_items";
}

std::vector<Index> CandidateItems(const SplitDataset& split, Index user,
                                  Protocol protocol) {
  if (protocol == Protocol::kRatedTestItems) {
    const auto items = split.test_items(user);
    return {items.begin(), items.end()};
  }
  const auto seen = split.train_items(user);
  std::vector<Index> candidates;
  candidates.reserve(split.num_items() - seen.size());
  std::size_t k = 0;
  for (Index i = 0; i < split.num_items(); ++i) {
    if (k < seen.size() && seen[k] == i) {
      ++k;
      continue;
    }
    candidates.push_back(i);
  }
  return candidates;
}

std::vector<ActivityBin> ActivityPopularityProfile(const SplitDataset& split,
                                                   int bins) {
  if (bins < 1) throw ArgumentError("bins must be positive");
  const auto num_users = split.num_users();
  std::vector<double> activity(num_users);
  std::vector<double> mean_popularity(num_users);
  for (Index u = 0; u < num_users; ++u) {
    const auto items = split.train_items(u);
    double total = 0.0;
    for (Index i : items) total += static_cast<double>(split.item_raters(i).size());
    activity[u] = static_cast<double>(items.size());
    mean_popularity[u] = total / static_cast<double>(items.size());
  }
  if (num_users == 0) return {};
  const auto normalized = MinMaxNormalize(activity);
  std::vector<double> sums(bins, 0.0);
  std::vector<std::size_t> counts(bins, 0);
  for (Index u = 0; u < num_users; ++u) {
    const int bin =
        std::min(static_cast<int>(normalized[u] * bins), bins - 1);
    sums[bin] += mean_popularity[u];
    ++counts[bin];
  }
  std::vector<ActivityBin> profile;
  for (int b = 0; b < bins; ++b) {
    if (counts[b] == 0) continue;
    profile.push_back({(b + 0.5) / bins,
                       sums[b] / static_cast<double>(counts[b]), counts[b]});
  }
  return profile;
}

DatasetSummary Summarize(const std::vector<Rating>& ratings, int tau,
                         const ItemStats& stats) {
  std::map<UserId, std::size_t> per_user;
  for (const auto& r : ratings) ++per_user[r.user];
  std::vector<ItemId> items;
  DatasetSummary summary;
  for (const auto& r : ratings) {
    if (per_user[r.user] < static_cast<std::size_t>(tau)) continue;
    ++summary.ratings;
    items.push_back(r.item);
  }
  for (const auto& [user, count] : per_user) {
    if (count >= static_cast<std::size_t>(tau)) ++summary.users;
  }
  std::sort(items.begin(), items.end());
  summary.items = static_cast<std::size_t>(
      std::unique(items.begin(), items.end()) - items.begin());
  if (summary.users > 0 && summary.items > 0) {
    summary.density_percent =
        100.0 * static_cast<double>(summary.ratings) /
        (static_cast<double>(summary.users) * static_cast<double>(summary.items));
  }
  if (!stats.long_tail.empty()) {
    summary.long_tail_percent = 100.0 *
                                static_cast<double>(stats.LongTailSize()) /
                                static_cast<double>(stats.long_tail.size());
  }
  return summary;
}

void WriteRatingsCsv(std::ostream& out, const std::vector<Rating>& ratings) {
  out << "user,item,rating,timestamp\n";
  for (const auto& r : ratings) {
    out << r.user << ',' << r.item << ',' << FormatDouble(r.value) << ',';
    if (r.timestamp) out << *r.timestamp;
    out << '\n';
  }
}

namespace {

nlohmann::json ManifestToJson(const SplitManifest& m) {
  return {
      {"kappa", m.options.kappa},
      {"tau", m.options.tau},
      {"seed", m.options.seed},
      {"source", m.source},
      {"dataset",
       {{"ratings", m.summary.ratings},
        {"users", m.summary.users},
        {"items", m.summary.items},
        {"density_percent", m.summary.density_percent},
        {"long_tail_percent", m.summary.long_tail_percent}}},
      {"train_ratings", m.train_ratings},
      {"test_ratings", m.test_ratings},
      {"users", m.users},
      {"items", m.items},
      {"split_hash", m.split_hash},
  };
}

std::string HashSplitFiles(std::string_view train_csv,
                           std::string_view test_csv) {
  std::string joined;
  joined.reserve(train_csv.size() + test_csv.size() + 1);
  joined.append(train_csv).push_back('\0');
  joined.append(test_csv);
  return Sha256Hex(joined);
}

}  // namespace

SplitManifest SaveSplit(const std::filesystem::path& dir,
                        const SplitDataset& split, SplitManifest manifest) {
  std::ostringstream train_csv;
  std::ostringstream test_csv;
  WriteRatingsCsv(train_csv, split.train());
  WriteRatingsCsv(test_csv, split.test());
  manifest.train_ratings = split.train().size();
  manifest.test_ratings = split.test().size();
  manifest.users = split.num_users();
  manifest.items = split.num_items();
  manifest.split_hash = HashSplitFiles(train_csv.str(), test_csv.str());

  std::filesystem::create_directories(dir);
  WriteFileAtomic(dir / "train.csv", train_csv.str());
  WriteFileAtomic(dir / "test.csv", test_csv.str());
  WriteFileAtomic(dir / "split.json", ManifestToJson(manifest).dump(2) + "\n");
  return manifest;
}

LoadedSplit LoadSplit(const std::filesystem::path& dir) {
  const auto train_text = ReadFile(dir / "train.csv");
  const auto test_text = ReadFile(dir / "test.csv");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ReadFile(dir / "split.json"));
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad split.json in " + dir.string() + ": " + e.what());
  }
  LoadedSplit loaded;
  auto& m = loaded.manifest;
  try {
    m.options.kappa = j.at("kappa").get<double>();
    m.options.tau = j.at("tau").get<int>();
    m.options.seed = j.at("seed").get<std::uint64_t>();
    m.source = j.at("source").get<std::string>();
    const auto& d = j.at("dataset");
    m.summary.ratings = d.at("ratings").get<std::size_t>();
    m.summary.users = d.at("users").get<std::size_t>();
    m.summary.items = d.at("items").get<std::size_t>();
    m.summary.density_percent = d.at("density_percent").get<double>();
    m.summary.long_tail_percent = d.at("long_tail_percent").get<double>();
    m.train_ratings = j.at("train_ratings").get<std::size_t>();
    m.test_ratings = j.at("test_ratings").get<std::size_t>();
    m.users = j.at("users").get<std::size_t>();
    m.items = j.at("items").get<std::size_t>();
    m.split_hash = j.at("split_hash").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad split.json in " + dir.string() + ": " + e.what());
  }
  if (HashSplitFiles(train_text, test_text) != m.split_hash) {
    throw StaleArtifactError("train.csv/test.csv in " + dir.string() +
                             " do not match split.json");
  }
  std::istringstream train_in(train_text);
  std::istringstream test_in(test_text);
  auto train = ParseRatings(train_in, RatingFormat::kCsv,
                            (dir / "train.csv").string());
  std::vector<Rating> test;
  if (m.test_ratings > 0) {
    test = ParseRatings(test_in, RatingFormat::kCsv,
                        (dir / "test.csv").string());
  }
  loaded.split = SplitDataset::FromParts(std::move(train), std::move(test));
  return loaded;
}

}  // namespace ganc
