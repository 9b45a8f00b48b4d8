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

// Per-user long-tail novelty preference estimators.

#ifndef GANC_PREFERENCE_H_
#define GANC_PREFERENCE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ganc/dataset.h"

namespace ganc {

enum class PreferenceModel {
  kActivity,
  kNormalizedLongTail,
  kTfidf,
  kGeneralized,
  kConstant,
  kRandom,
};

PreferenceModel ParsePreferenceModel(std::string_view name);
std::string_view PreferenceModelName(PreferenceModel model);

// theta_ui for every observed train pair, stored in the same layout as
// SplitDataset::train_items: values[u][k] belongs to train_items(u)[k].
struct PerUserItemPreference {
  std::vector<std::vector<double>> values;
};

struct PreferenceVector {
  PreferenceModel model = PreferenceModel::kConstant;
  // theta_u per user index, always within [0, 1].
  std::vector<double> theta;
  // w_i per item index; only the generalized model fills it.
  std::optional<std::vector<double>> weights;
  std::optional<int> iterations;
  std::optional<bool> converged;
};

// Raw theta_u = |I_u^R|, min-max normalized across users.
PreferenceVector ThetaActivity(const SplitDataset& split);

// Fraction of each user's train items that fall in the long tail.
PreferenceVector ThetaNormalizedLongTail(const SplitDataset& split,
                                         const ItemStats& stats);

// r_ui * ln(|U| / |U_i^R|), projected jointly over all pairs onto [0, 1].
PerUserItemPreference ComputeThetaUi(const SplitDataset& split);

// Unweighted mean of the projected theta_ui.
PreferenceVector ThetaTfidf(const SplitDataset& split);

struct GeneralizedOptions {
  double lambda1 = 1.0;
  double tol = 1e-6;
  int max_iters = 100;
};

// Alternates the closed-form updates
//   theta_u = sum_i w_i theta_ui / sum_i w_i        (maximizes O for fixed w)
//   w_i     = lambda1 / eps_i,
//   eps_i   = sum_{u in U_i^R} 1 - (theta_ui - theta_u)^2
// starting from w = 1, until the largest per-user change drops below tol.
// With max_iters = 0 the result equals ThetaTfidf.
//
// Throws DegeneracyError naming the item when some eps_i <= 0.
PreferenceVector ThetaGeneralized(const SplitDataset& split,
                                  const GeneralizedOptions& options = {});
PreferenceVector ThetaGeneralized(const SplitDataset& split,
                                  const PerUserItemPreference& theta_ui,
                                  const GeneralizedOptions& options = {});

// O(w, theta) - lambda1 * sum_i log w_i, the saddle objective the updates
// above optimize. Exposed for tests and diagnostics.
double MinimaxObjective(const SplitDataset& split,
                        const PerUserItemPreference& theta_ui,
                        std::span<const double> weights,
                        std::span<const double> theta, double lambda1);

// Item mediocrity coefficients eps_i for a given theta.
std::vector<double> MediocrityCoefficients(const SplitDataset& split,
                                           const PerUserItemPreference& theta_ui,
                                           std::span<const double> theta);

// Same value for every user. Throws ArgumentError unless 0 <= value <= 1.
PreferenceVector ThetaConstant(std::size_t num_users, double value);
// i.i.d. uniform [0, 1) per user.
PreferenceVector ThetaRandom(std::size_t num_users, std::uint64_t seed);

struct PreferenceSummary {
  double mean = 0.0;
  double variance = 0.0;
  std::vector<std::size_t> histogram;  // equal-width bins over [0, 1]
};

PreferenceSummary SummarizePreferences(const PreferenceVector& prefs,
                                       int bins = 10);

struct PreferenceManifest {
  std::string model;
  double lambda1 = 0.0;
  double tol = 0.0;
  int max_iters = 0;
  std::optional<int> iterations;
  std::optional<bool> converged;
  double constant = 0.0;
  std::uint64_t seed = 0;
  std::string split_hash;
};

// Writes theta.csv (`user,theta`), weights.csv (`item,weight`, generalized
// only) and prefs.json under `dir`.
void SavePreferences(const std::filesystem::path& dir,
                     const SplitDataset& split, const PreferenceVector& prefs,
                     const PreferenceManifest& manifest);

struct LoadedPreferences {
  PreferenceVector prefs;
  PreferenceManifest manifest;
};

// Throws StaleArtifactError when prefs.json names a different split hash.
LoadedPreferences LoadPreferences(const std::filesystem::path& dir,
                                  const SplitDataset& split,
                                  std::string_view split_hash);

}  // namespace ganc

#endif  // GANC_PREFERENCE_H_
