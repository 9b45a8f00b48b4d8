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

// Accuracy scorers a(u, i) and coverage scorers c(i), both valued in [0, 1].

#ifndef GANC_RECOMMENDERS_H_
#define GANC_RECOMMENDERS_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ganc/dataset.h"
#include "ganc/frequency.h"

namespace ganc {

class AccuracyScorer {
 public:
  virtual ~AccuracyScorer() = default;

  virtual std::string Name() const = 0;
  virtual double Score(Index user, Index item) const = 0;

  // Fills out[i] = Score(user, i) for every item. `out` must have one slot
  // per item of the split the scorer was built on.
  virtual void UserScores(Index user, std::span<double> out) const;
};

// a(u, i) = 1 for the n most popular candidate items of u (ties by ascending
// item id), 0 otherwise.
class PopScorer final : public AccuracyScorer {
 public:
  PopScorer(const SplitDataset& split, const ItemStats& stats, int n,
            Protocol protocol = Protocol::kAllUnrated);

  std::string Name() const override { return "Pop"; }
  double Score(Index user, Index item) const override;
  std::span<const Index> TopItems(Index user) const { return top_[user]; }

 private:
  std::vector<std::vector<Index>> top_;  // sorted by item index
};

struct RsvdOptions {
  int factors = 100;
  double lambda = 0.05;
  double eta = 0.03;
  int epochs = 30;
  std::uint64_t seed = 0;
};

// Latent factor model without bias terms. Rows are dense user/item indices
// of the split it was trained on.
struct MFModel {
  int factors = 0;
  std::vector<double> user_factors;  // num_users x factors, row-major
  std::vector<double> item_factors;  // num_items x factors, row-major
  double global_mean = 0.0;
  RsvdOptions options;

  std::size_t num_users() const;
  std::size_t num_items() const;
  std::span<const double> user_row(Index u) const;
  std::span<const double> item_row(Index i) const;
  double Predict(Index user, Index item) const;
};

// Minimizes sum (r_ui - p_u.q_i)^2 + lambda (|p_u|^2 + |q_i|^2) with plain
// SGD over a freshly shuffled train set each epoch. Factors start i.i.d.
// uniform in [-0.05, 0.05]. Throws DivergenceError on non-finite factors.
MFModel RsvdTrain(const SplitDataset& split, const RsvdOptions& options);

// RMSE of raw predictions; pairs with an unknown user or item are predicted
// by the global train mean.
double Rmse(const MFModel& model, const SplitDataset& split,
            const std::vector<Rating>& ratings);

// Per-user min-max normalized predictions over the user's unrated items.
class MFScorer final : public AccuracyScorer {
 public:
  MFScorer(const MFModel& model, const SplitDataset& split);

  std::string Name() const override { return "RSVD"; }
  double Score(Index user, Index item) const override;
  void UserScores(Index user, std::span<double> out) const override;
  // Raw (min, max) of the user's predictions over unrated items.
  std::pair<double, double> UserRange(Index user) const {
    return ranges_[user];
  }

 private:
  const MFModel* model_;
  std::vector<std::pair<double, double>> ranges_;
};

// Scores from an external `user,item,score` csv, min-max normalized per
// user. Pairs absent from the file score 0.
class ExternalScorer final : public AccuracyScorer {
 public:
  ExternalScorer(const std::filesystem::path& path, const SplitDataset& split);

  std::string Name() const override { return "External"; }
  double Score(Index user, Index item) const override;
  void UserScores(Index user, std::span<double> out) const override;

 private:
  // Per user, (item, normalized score) sorted by item.
  std::vector<std::vector<std::pair<Index, double>>> scores_;
};

// Uniform [0, 1) score per (user, item), a pure function of the seed. With
// theta = 0 it turns the framework into the random baseline recommender.
class RandomScorer final : public AccuracyScorer {
 public:
  explicit RandomScorer(std::uint64_t seed) : seed_(seed) {}

  std::string Name() const override { return "Rand"; }
  double Score(Index user, Index item) const override;

 private:
  std::uint64_t seed_;
};

class CoverageScorer {
 public:
  virtual ~CoverageScorer() = default;

  virtual std::string Name() const = 0;
  virtual double Score(Index item) const = 0;
  // True when scores do not depend on earlier assignments.
  virtual bool IsModular() const = 0;
};

// c(i) = 1 / sqrt(f_i^R + 1).
class StatCoverage final : public CoverageScorer {
 public:
  explicit StatCoverage(const ItemStats& stats);

  std::string Name() const override { return "Stat"; }
  double Score(Index item) const override { return scores_[item]; }
  bool IsModular() const override { return true; }

 private:
  std::vector<double> scores_;
};

// c(i) = 1 / sqrt(f_i^A + 1), read from the referenced frequencies at call
// time. The frequencies must outlive the scorer.
class DynCoverage final : public CoverageScorer {
 public:
  explicit DynCoverage(const RecFrequency& frequency) : frequency_(&frequency) {}

  std::string Name() const override { return "Dyn"; }
  double Score(Index item) const override;
  bool IsModular() const override { return false; }

 private:
  const RecFrequency* frequency_;
};

// c(i) ~ unif[0, 1), drawn once per item from the seed.
class RandCoverage final : public CoverageScorer {
 public:
  RandCoverage(std::size_t num_items, std::uint64_t seed);

  std::string Name() const override { return "Rand"; }
  double Score(Index item) const override { return scores_[item]; }
  bool IsModular() const override { return true; }

 private:
  std::vector<double> scores_;
};

struct ModelManifest {
  RsvdOptions options;
  double train_rmse = 0.0;
  double test_rmse = 0.0;
  std::string split_hash;
};

// Writes user_factors.csv, item_factors.csv (`id,f1,...,fg`) and model.json.
void SaveModel(const std::filesystem::path& dir, const SplitDataset& split,
               const MFModel& model, const ModelManifest& manifest);

struct LoadedModel {
  MFModel model;
  ModelManifest manifest;
};

// Throws StaleArtifactError when model.json names a different split hash.
LoadedModel LoadModel(const std::filesystem::path& dir,
                      const SplitDataset& split, std::string_view split_hash);

}  // namespace ganc

#endif  // GANC_RECOMMENDERS_H_
