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

#include "ganc/recommenders.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "ganc/error.h"
#include "ganc/io.h"
#include "json.hpp"

namespace ganc {
namespace {

double Dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double NormalizeInRange(double raw, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  return std::clamp((raw - lo) / (hi - lo), 0.0, 1.0);
}

}  // namespace

void AccuracyScorer::UserScores(Index user, std::span<double> out) const {
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = Score(user, static_cast<Index>(i));
  }
}

PopScorer::PopScorer(const SplitDataset& split, const ItemStats& stats, int n,
                     Protocol protocol) {
  if (n < 1) throw ArgumentError("Pop needs n >= 1");
  if (static_cast<std::size_t>(n) > split.num_items()) {
    throw ArgumentError("Pop n exceeds the number of train items");
  }
  // rank[i] = position of item i in (popularity desc, id asc) order.
  std::vector<Index> order(split.num_items());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return stats.popularity[a] > stats.popularity[b];
  });
  std::vector<Index> rank(split.num_items());
  for (Index r = 0; r < order.size(); ++r) rank[order[r]] = r;

  top_.resize(split.num_users());
  for (Index u = 0; u < split.num_users(); ++u) {
    auto& top = top_[u];
    if (protocol == Protocol::kAllUnrated) {
      for (Index i : order) {
        if (top.size() == static_cast<std::size_t>(n)) break;
        if (!split.RatedInTrain(u, i)) top.push_back(i);
      }
    } else {
      auto candidates = CandidateItems(split, u, protocol);
      std::sort(candidates.begin(), candidates.end(),
                [&](Index a, Index b) { return rank[a] < rank[b]; });
      candidates.resize(std::min(candidates.size(), static_cast<std::size_t>(n)));
      top = std::move(candidates);
    }
    std::sort(top.begin(), top.end());
  }
}

double PopScorer::Score(Index user, Index item) const {
  const auto& top = top_[user];
  return std::binary_search(top.begin(), top.end(), item) ? 1.0 : 0.0;
}

std::size_t MFModel::num_users() const {
  return factors > 0 ? user_factors.size() / static_cast<std::size_t>(factors) : 0;
}

std::size_t MFModel::num_items() const {
  return factors > 0 ? item_factors.size() / static_cast<std::size_t>(factors) : 0;
}

std::span<const double> MFModel::user_row(Index u) const {
  return std::span<const double>(user_factors)
      .subspan(static_cast<std::size_t>(u) * factors, factors);
}

std::span<const double> MFModel::item_row(Index i) const {
  return std::span<const double>(item_factors)
      .subspan(static_cast<std::size_t>(i) * factors, factors);
}

double MFModel::Predict(Index user, Index item) const {
  return Dot(user_row(user), item_row(item));
}

MFModel RsvdTrain(const SplitDataset& split, const RsvdOptions& options) {
  if (split.train().empty()) throw EmptyDatasetError("empty train set");
  if (options.factors < 1) throw ArgumentError("factors must be positive");
  if (options.lambda < 0.0) throw ArgumentError("lambda must be >= 0");
  if (!(options.eta > 0.0)) throw ArgumentError("eta must be positive");
  if (options.epochs < 1) throw ArgumentError("epochs must be positive");

  const auto g = static_cast<std::size_t>(options.factors);
  MFModel model;
  model.factors = options.factors;
  model.options = options;
  model.user_factors.resize(split.num_users() * g);
  model.item_factors.resize(split.num_items() * g);

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> init(-0.05, 0.05);
  for (double& v : model.user_factors) v = init(rng);
  for (double& v : model.item_factors) v = init(rng);

  struct Triple {
    Index user;
    Index item;
    double value;
  };
  std::vector<Triple> triples;
  triples.reserve(split.train().size());
  double sum = 0.0;
  for (Index u = 0; u < split.num_users(); ++u) {
    const auto items = split.train_items(u);
    const auto values = split.train_values(u);
    for (std::size_t k = 0; k < items.size(); ++k) {
      triples.push_back({u, items[k], values[k]});
      sum += values[k];
    }
  }
  model.global_mean = sum / static_cast<double>(triples.size());

  const double eta = options.eta;
  const double lambda = options.lambda;
  for (int epoch = 1; epoch <= options.epochs; ++epoch) {
    std::shuffle(triples.begin(), triples.end(), rng);
    for (const auto& t : triples) {
      double* p = model.user_factors.data() + t.user * g;
      double* q = model.item_factors.data() + t.item * g;
      double prediction = 0.0;
      for (std::size_t k = 0; k < g; ++k) prediction += p[k] * q[k];
      const double error = t.value - prediction;
      for (std::size_t k = 0; k < g; ++k) {
        const double pk = p[k];
        const double qk = q[k];
        p[k] += eta * (error * qk - lambda * pk);
        q[k] += eta * (error * pk - lambda * qk);
      }
    }
    const auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(model.user_factors.begin(), model.user_factors.end(),
                     finite) ||
        !std::all_of(model.item_factors.begin(), model.item_factors.end(),
                     finite)) {
      throw DivergenceError("SGD diverged in epoch " + std::to_string(epoch));
    }
  }
  return model;
}

double Rmse(const MFModel& model, const SplitDataset& split,
            const std::vector<Rating>& ratings) {
  if (ratings.empty()) throw ArgumentError("RMSE of an empty rating list");
  double squared = 0.0;
  for (const auto& r : ratings) {
    const auto u = split.FindUser(r.user);
    const auto i = split.FindItem(r.item);
    const double prediction =
        (u && i) ? model.Predict(*u, *i) : model.global_mean;
    squared += (r.value - prediction) * (r.value - prediction);
  }
  return std::sqrt(squared / static_cast<double>(ratings.size()));
}

MFScorer::MFScorer(const MFModel& model, const SplitDataset& split)
    : model_(&model) {
  if (model.num_users() != split.num_users() ||
      model.num_items() != split.num_items()) {
    throw LookupError("MF model does not match the split's users and items");
  }
  ranges_.resize(split.num_users());
  for (Index u = 0; u < split.num_users(); ++u) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (Index i = 0; i < split.num_items(); ++i) {
      if (split.RatedInTrain(u, i)) continue;
      const double raw = model.Predict(u, i);
      lo = std::min(lo, raw);
      hi = std::max(hi, raw);
    }
    ranges_[u] = {lo, hi};
  }
}

double MFScorer::Score(Index user, Index item) const {
  if (user >= ranges_.size() || item >= model_->num_items()) {
    throw LookupError("MF score for unknown user or item index");
  }
  const auto [lo, hi] = ranges_[user];
  return NormalizeInRange(model_->Predict(user, item), lo, hi);
}

void MFScorer::UserScores(Index user, std::span<double> out) const {
  const auto [lo, hi] = ranges_[user];
  const auto p = model_->user_row(user);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = NormalizeInRange(Dot(p, model_->item_row(static_cast<Index>(i))),
                              lo, hi);
  }
}

ExternalScorer::ExternalScorer(const std::filesystem::path& path,
                               const SplitDataset& split) {
  std::istringstream in(ReadFile(path));
  std::vector<std::vector<std::pair<Index, double>>> raw(split.num_users());
  std::string line;
  std::size_t line_number = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_number;
    const auto text = Trim(line);
    if (text.empty()) continue;
    const auto fields = SplitFields(text, ",");
    const bool header_allowed = std::exchange(first, false);
    std::int64_t user = 0;
    std::int64_t item = 0;
    double score = 0.0;
    if (fields.size() != 3) {
      throw ParseError(path.string(), line_number, "expected user,item,score");
    }
    if (!ParseInt64(fields[0], user)) {
      if (header_allowed) continue;
      throw ParseError(path.string(), line_number, "bad user id");
    }
    if (!ParseInt64(fields[1], item) || !ParseDouble(fields[2], score) ||
        !std::isfinite(score)) {
      throw ParseError(path.string(), line_number, "bad item id or score");
    }
    const auto u = split.FindUser(user);
    const auto i = split.FindItem(item);
    if (!u || !i) continue;
    raw[*u].emplace_back(*i, score);
  }
  scores_.resize(split.num_users());
  for (Index u = 0; u < split.num_users(); ++u) {
    auto& rows = raw[u];
    // Later duplicates win: stable sort, then keep the last of each run.
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
      return a.first < b.first;
    });
    auto& out = scores_[u];
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (k + 1 < rows.size() && rows[k + 1].first == rows[k].first) continue;
      out.push_back(rows[k]);
    }
    if (out.empty()) continue;
    std::vector<double> values;
    for (const auto& [item, score] : out) values.push_back(score);
    const auto normalized = MinMaxNormalize(values);
    for (std::size_t k = 0; k < out.size(); ++k) out[k].second = normalized[k];
  }
}

double ExternalScorer::Score(Index user, Index item) const {
  const auto& row = scores_[user];
  auto it = std::lower_bound(
      row.begin(), row.end(), item,
      [](const std::pair<Index, double>& e, Index i) { return e.first < i; });
  return (it != row.end() && it->first == item) ? it->second : 0.0;
}

void ExternalScorer::UserScores(Index user, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& [item, score] : scores_[user]) {
    if (item < out.size()) out[item] = score;
  }
}

double RandomScorer::Score(Index user, Index item) const {
  const std::uint64_t key =
      (static_cast<std::uint64_t>(user) << 32) | static_cast<std::uint64_t>(item);
  const std::uint64_t bits = SplitMix64(SplitMix64(seed_) ^ key);
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

StatCoverage::StatCoverage(const ItemStats& stats) {
  scores_.reserve(stats.popularity.size());
  for (auto f : stats.popularity) {
    scores_.push_back(1.0 / std::sqrt(static_cast<double>(f) + 1.0));
  }
}

double DynCoverage::Score(Index item) const {
  return 1.0 / std::sqrt(static_cast<double>(frequency_->count(item)) + 1.0);
}

RandCoverage::RandCoverage(std::size_t num_items, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  scores_.resize(num_items);
  for (double& s : scores_) s = uniform(rng);
}

namespace {

std::string FactorCsv(const SplitDataset& split, const MFModel& model,
                      bool users) {
  std::ostringstream out;
  out << "id";
  for (int k = 1; k <= model.factors; ++k) out << ",f" << k;
  out << '\n';
  const auto rows = users ? split.num_users() : split.num_items();
  for (Index r = 0; r < rows; ++r) {
    out << (users ? split.user_id(r) : split.item_id(r));
    for (double v : users ? model.user_row(r) : model.item_row(r)) {
      out << ',' << FormatDouble(v);
    }
    out << '\n';
  }
  return out.str();
}

void ReadFactorCsv(const std::filesystem::path& path, const SplitDataset& split,
                   bool users, int factors, std::vector<double>& dest) {
  const auto rows = users ? split.num_users() : split.num_items();
  dest.assign(rows * static_cast<std::size_t>(factors),
              std::numeric_limits<double>::quiet_NaN());
  std::istringstream in(ReadFile(path));
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line_number == 1 || Trim(line).empty()) continue;
    const auto fields = SplitFields(Trim(line), ",");
    std::int64_t id = 0;
    if (fields.size() != static_cast<std::size_t>(factors) + 1 ||
        !ParseInt64(fields[0], id)) {
      throw ParseError(path.string(), line_number, "bad factor row");
    }
    const Index r = users ? split.UserIndex(id) : split.ItemIndex(id);
    for (int k = 0; k < factors; ++k) {
      double v = 0.0;
      if (!ParseDouble(fields[k + 1], v)) {
        throw ParseError(path.string(), line_number, "bad factor value");
      }
      dest[static_cast<std::size_t>(r) * factors + k] = v;
    }
  }
  if (!std::all_of(dest.begin(), dest.end(),
                   [](double v) { return std::isfinite(v); })) {
    throw DataError(path.string() + " is missing rows or has non-finite values");
  }
}

}  // namespace

void SaveModel(const std::filesystem::path& dir, const SplitDataset& split,
               const MFModel& model, const ModelManifest& manifest) {
  const nlohmann::json j = {
      {"factors", manifest.options.factors},
      {"lambda", manifest.options.lambda},
      {"eta", manifest.options.eta},
      {"epochs", manifest.options.epochs},
      {"seed", manifest.options.seed},
      {"global_mean", model.global_mean},
      {"train_rmse", manifest.train_rmse},
      {"test_rmse", manifest.test_rmse},
      {"split_hash", manifest.split_hash},
  };
  std::filesystem::create_directories(dir);
  WriteFileAtomic(dir / "user_factors.csv", FactorCsv(split, model, true));
  WriteFileAtomic(dir / "item_factors.csv", FactorCsv(split, model, false));
  WriteFileAtomic(dir / "model.json", j.dump(2) + "\n");
}

LoadedModel LoadModel(const std::filesystem::path& dir,
                      const SplitDataset& split, std::string_view split_hash) {
  LoadedModel loaded;
  auto& m = loaded.manifest;
  try {
    const auto j = nlohmann::json::parse(ReadFile(dir / "model.json"));
    m.options.factors = j.at("factors").get<int>();
    m.options.lambda = j.at("lambda").get<double>();
    m.options.eta = j.at("eta").get<double>();
    m.options.epochs = j.at("epochs").get<int>();
    m.options.seed = j.at("seed").get<std::uint64_t>();
    m.train_rmse = j.at("train_rmse").get<double>();
    m.test_rmse = j.at("test_rmse").get<double>();
    m.split_hash = j.at("split_hash").get<std::string>();
    loaded.model.global_mean = j.at("global_mean").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad model.json in " + dir.string() + ": " + e.what());
  }
  if (m.split_hash != split_hash) {
    throw StaleArtifactError("model in " + dir.string() +
                             " was trained on a different split");
  }
  if (m.options.factors < 1) throw DataError("model.json: factors must be >= 1");
  auto& model = loaded.model;
  model.factors = m.options.factors;
  model.options = m.options;
  ReadFactorCsv(dir / "user_factors.csv", split, true, model.factors,
                model.user_factors);
  ReadFactorCsv(dir / "item_factors.csv", split, false, model.factors,
                model.item_factors);
  return loaded;
}

}  // namespace ganc
