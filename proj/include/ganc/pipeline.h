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

// Glue shared by the command line tool and the end-to-end checks: building
// preferences and scorers by name, producing a collection for a
// GANC(arec, theta, crec) configuration, and sample-size sweeps.

#ifndef GANC_PIPELINE_H_
#define GANC_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ganc/dataset.h"
#include "ganc/greedy.h"
#include "ganc/metrics.h"
#include "ganc/preference.h"
#include "ganc/recommenders.h"

namespace ganc {

struct PreferenceConfig {
  PreferenceModel model = PreferenceModel::kGeneralized;
  GeneralizedOptions generalized;
  double constant = 0.5;
  std::uint64_t seed = 0;
};

PreferenceVector BuildPreferences(const SplitDataset& split,
                                  const ItemStats& stats,
                                  const PreferenceConfig& config);

enum class ArecKind { kPop, kRsvd, kExternal, kRand };
enum class CrecKind { kDyn, kStat, kRand };

ArecKind ParseArecKind(std::string_view name);
std::string_view ArecKindName(ArecKind kind);
CrecKind ParseCrecKind(std::string_view name);
std::string_view CrecKindName(CrecKind kind);

struct ArecConfig {
  ArecKind kind = ArecKind::kPop;
  // Pop list length; defaults to the recommendation n when unset.
  std::optional<int> pop_n;
  std::filesystem::path external_path;
  std::uint64_t seed = 0;
};

// Owns an accuracy scorer and whatever it borrows from.
struct ArecHandle {
  std::unique_ptr<MFModel> model;
  std::unique_ptr<AccuracyScorer> scorer;
};

// `model` is required for kRsvd and copied into the handle.
ArecHandle BuildArec(const SplitDataset& split, const ItemStats& stats,
                     const ArecConfig& config, int n, Protocol protocol,
                     const MFModel* model = nullptr);

struct RecommendConfig {
  int n = 5;
  std::size_t s = 500;
  CrecKind crec = CrecKind::kDyn;
  std::uint64_t seed = 0;
  int workers = 1;
  Protocol protocol = Protocol::kAllUnrated;
};

struct RecommendResult {
  TopNCollection collection;
  // Sample size actually used (dyn only; min(s, eligible users)).
  std::size_t s_effective = 0;
  double sample_seconds = 0.0;
  double sequential_seconds = 0.0;
  double parallel_seconds = 0.0;
  double total_seconds = 0.0;
};

// crec = dyn runs OSLG with min(s, eligible users) sampled users; stat and
// rand run the independent per-user greedy.
RecommendResult Recommend(const SplitDataset& split, const ItemStats& stats,
                          const PreferenceVector& prefs,
                          const AccuracyScorer& arec,
                          const RecommendConfig& config);

// "GANC(Pop, generalized, Dyn)".
std::string GancName(std::string_view arec, std::string_view theta,
                     std::string_view crec);

struct SweepRow {
  std::size_t s = 0;
  std::size_t s_effective = 0;
  int repetitions = 0;
  double f_measure = 0.0;
  double coverage = 0.0;
  double gini = 0.0;
  double lt_accuracy = 0.0;
};

// For each s, averages the metrics of `repetitions` dyn runs seeded
// config.seed, config.seed + 1, ...
std::vector<SweepRow> Sweep(const SplitDataset& split, const ItemStats& stats,
                            const PreferenceVector& prefs,
                            const AccuracyScorer& arec,
                            const RecommendConfig& config,
                            const std::vector<std::size_t>& s_values,
                            int repetitions);

std::string SweepToCsv(const std::vector<SweepRow>& rows);

}  // namespace ganc

#endif  // GANC_PIPELINE_H_
