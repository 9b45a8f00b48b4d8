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

#include "ganc/preference.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "ganc/error.h"
#include "ganc/io.h"
#include "json.hpp"

namespace ganc {

PreferenceModel ParsePreferenceModel(std::string_view name) {
  if (name == "activity") return PreferenceModel::kActivity;
  if (name == "normalized" || name == "normalized_longtail") {
    return PreferenceModel::kNormalizedLongTail;
  }
  if (name == "tfidf") return PreferenceModel::kTfidf;
  if (name == "generalized") return PreferenceModel::kGeneralized;
  if (name == "constant") return PreferenceModel::kConstant;
  if (name == "random") return PreferenceModel::kRandom;
  throw ArgumentError("unknown preference model '" + std::string(name) + "'");
}

std::string_view PreferenceModelName(PreferenceModel model) {
  switch (model) {
    case PreferenceModel::kActivity:
      return "activity";
    case PreferenceModel::kNormalizedLongTail:
      return "normalized";
    case PreferenceModel::kTfidf:
      return "tfidf";
    case PreferenceModel::kGeneralized:
      return "generalized";
    case PreferenceModel::kConstant:
      return "constant";
    case PreferenceModel::kRandom:
      return "random";
  }
  return "constant";
}

PreferenceVector ThetaActivity(const SplitDataset& split) {
  std::vector<double> counts(split.num_users());
  for (Index u = 0; u < split.num_users(); ++u) {
    counts[u] = static_cast<double>(split.train_items(u).size());
  }
  PreferenceVector prefs;
  prefs.model = PreferenceModel::kActivity;
  if (!counts.empty()) prefs.theta = MinMaxNormalize(counts);
  return prefs;
}

PreferenceVector ThetaNormalizedLongTail(const SplitDataset& split,
                                         const ItemStats& stats) {
  PreferenceVector prefs;
  prefs.model = PreferenceModel::kNormalizedLongTail;
  prefs.theta.resize(split.num_users());
  for (Index u = 0; u < split.num_users(); ++u) {
    const auto items = split.train_items(u);
    const auto in_tail = std::count_if(items.begin(), items.end(),
                                       [&](Index i) { return stats.InLongTail(i); });
    prefs.theta[u] =
        static_cast<double>(in_tail) / static_cast<double>(items.size());
  }
  return prefs;
}

PerUserItemPreference ComputeThetaUi(const SplitDataset& split) {
  const double num_users = static_cast<double>(split.num_users());
  PerUserItemPreference out;
  out.values.resize(split.num_users());
  std::vector<double> flat;
  flat.reserve(split.train().size());
  for (Index u = 0; u < split.num_users(); ++u) {
    const auto items = split.train_items(u);
    const auto ratings = split.train_values(u);
    for (std::size_t k = 0; k < items.size(); ++k) {
      const double raters = static_cast<double>(split.item_raters(items[k]).size());
      flat.push_back(ratings[k] * std::log(num_users / raters));
    }
  }
  if (flat.empty()) return out;
  const auto projected = MinMaxNormalize(flat);
  std::size_t pos = 0;
  for (Index u = 0; u < split.num_users(); ++u) {
    const auto n = split.train_items(u).size();
    out.values[u].assign(projected.begin() + static_cast<std::ptrdiff_t>(pos),
                         projected.begin() + static_cast<std::ptrdiff_t>(pos + n));
    pos += n;
  }
  return out;
}

namespace {

// Weighted mean of theta_ui per user; weights indexed by item.
std::vector<double> WeightedUserMeans(const SplitDataset& split,
                                      const PerUserItemPreference& theta_ui,
                                      std::span<const double> weights) {
  std::vector<double> theta(split.num_users());
  for (Index u = 0; u < split.num_users(); ++u) {
    const auto items = split.train_items(u);
    const auto& values = theta_ui.values[u];
    double numerator = 0.0;
    double denominator = 0.0;
    for (std::size_t k = 0; k < items.size(); ++k) {
      numerator += weights[items[k]] * values[k];
      denominator += weights[items[k]];
    }
    theta[u] = numerator / denominator;
  }
  return theta;
}

}  // namespace

PreferenceVector ThetaTfidf(const SplitDataset& split) {
  const auto theta_ui = ComputeThetaUi(split);
  const std::vector<double> ones(split.num_items(), 1.0);
  PreferenceVector prefs;
  prefs.model = PreferenceModel::kTfidf;
  prefs.theta = WeightedUserMeans(split, theta_ui, ones);
  return prefs;
}

std::vector<double> MediocrityCoefficients(const SplitDataset& split,
                                           const PerUserItemPreference& theta_ui,
                                           std::span<const double> theta) {
  std::vector<double> eps(split.num_items(), 0.0);
  for (Index u = 0; u < split.num_users(); ++u) {
    const auto items = split.train_items(u);
    const auto& values = theta_ui.values[u];
    for (std::size_t k = 0; k < items.size(); ++k) {
      const double d = values[k] - theta[u];
      eps[items[k]] += 1.0 - d * d;
    }
  }
  return eps;
}

double MinimaxObjective(const SplitDataset& split,
                        const PerUserItemPreference& theta_ui,
                        std::span<const double> weights,
                        std::span<const double> theta, double lambda1) {
  const auto eps = MediocrityCoefficients(split, theta_ui, theta);
  double objective = 0.0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    objective += weights[i] * eps[i] - lambda1 * std::log(weights[i]);
  }
  return objective;
}

PreferenceVector ThetaGeneralized(const SplitDataset& split,
                                  const GeneralizedOptions& options) {
  return ThetaGeneralized(split, ComputeThetaUi(split), options);
}

PreferenceVector ThetaGeneralized(const SplitDataset& split,
                                  const PerUserItemPreference& theta_ui,
                                  const GeneralizedOptions& options) {
  if (!(options.lambda1 > 0.0)) throw ArgumentError("lambda1 must be positive");
  if (!(options.tol > 0.0)) throw ArgumentError("tol must be positive");
  if (options.max_iters < 0) throw ArgumentError("max_iters must be >= 0");

  std::vector<double> weights(split.num_items(), 1.0);
  auto theta = WeightedUserMeans(split, theta_ui, weights);
  int iterations = 0;
  bool converged = false;
  while (iterations < options.max_iters) {
    ++iterations;
    const auto eps = MediocrityCoefficients(split, theta_ui, theta);
    for (Index i = 0; i < split.num_items(); ++i) {
      if (!(eps[i] > 0.0)) {
        throw DegeneracyError("item " + std::to_string(split.item_id(i)) +
                              " has mediocrity coefficient " +
                              FormatDouble(eps[i]) + " <= 0");
      }
      weights[i] = options.lambda1 / eps[i];
    }
    auto next = WeightedUserMeans(split, theta_ui, weights);
    double max_change = 0.0;
    for (std::size_t u = 0; u < next.size(); ++u) {
      max_change = std::max(max_change, std::abs(next[u] - theta[u]));
    }
    theta = std::move(next);
    if (max_change < options.tol) {
      converged = true;
      break;
    }
  }
  for (double& t : theta) t = std::clamp(t, 0.0, 1.0);

  PreferenceVector prefs;
  prefs.model = PreferenceModel::kGeneralized;
  prefs.theta = std::move(theta);
  prefs.weights = std::move(weights);
  prefs.iterations = iterations;
  prefs.converged = converged;
  return prefs;
}

PreferenceVector ThetaConstant(std::size_t num_users, double value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ArgumentError("constant preference must lie in [0, 1]");
  }
  PreferenceVector prefs;
  prefs.model = PreferenceModel::kConstant;
  prefs.theta.assign(num_users, value);
  return prefs;
}

PreferenceVector ThetaRandom(std::size_t num_users, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  PreferenceVector prefs;
  prefs.model = PreferenceModel::kRandom;
  prefs.theta.resize(num_users);
  for (double& t : prefs.theta) t = uniform(rng);
  return prefs;
}

PreferenceSummary SummarizePreferences(const PreferenceVector& prefs,
                                       int bins) {
  if (bins < 1) throw ArgumentError("bins must be positive");
  PreferenceSummary summary;
  summary.histogram.assign(static_cast<std::size_t>(bins), 0);
  const auto n = static_cast<double>(prefs.theta.size());
  if (prefs.theta.empty()) return summary;
  for (double t : prefs.theta) summary.mean += t;
  summary.mean /= n;
  for (double t : prefs.theta) {
    summary.variance += (t - summary.mean) * (t - summary.mean);
    const int bin = std::min(static_cast<int>(t * bins), bins - 1);
    ++summary.histogram[static_cast<std::size_t>(bin)];
  }
  summary.variance /= n;
  return summary;
}

void SavePreferences(const std::filesystem::path& dir,
                     const SplitDataset& split, const PreferenceVector& prefs,
                     const PreferenceManifest& manifest) {
  std::ostringstream theta_csv;
  theta_csv << "user,theta\n";
  for (Index u = 0; u < split.num_users(); ++u) {
    theta_csv << split.user_id(u) << ',' << FormatDouble(prefs.theta[u]) << '\n';
  }
  nlohmann::json j = {
      {"model", manifest.model},
      {"lambda1", manifest.lambda1},
      {"tol", manifest.tol},
      {"max_iters", manifest.max_iters},
      {"constant", manifest.constant},
      {"seed", manifest.seed},
      {"split_hash", manifest.split_hash},
  };
  j["iterations"] = manifest.iterations ? nlohmann::json(*manifest.iterations)
                                        : nlohmann::json(nullptr);
  j["converged"] = manifest.converged ? nlohmann::json(*manifest.converged)
                                      : nlohmann::json(nullptr);
  std::filesystem::create_directories(dir);
  WriteFileAtomic(dir / "theta.csv", theta_csv.str());
  if (prefs.weights) {
    std::ostringstream weights_csv;
    weights_csv << "item,weight\n";
    for (Index i = 0; i < split.num_items(); ++i) {
      weights_csv << split.item_id(i) << ','
                  << FormatDouble((*prefs.weights)[i]) << '\n';
    }
    WriteFileAtomic(dir / "weights.csv", weights_csv.str());
  } else {
    std::filesystem::remove(dir / "weights.csv");
  }
  WriteFileAtomic(dir / "prefs.json", j.dump(2) + "\n");
}

namespace {

// Reads a two-column `id,value` csv with a header line.
std::vector<std::pair<std::int64_t, double>> ReadIdValueCsv(
    const std::filesystem::path& path) {
  std::istringstream in(ReadFile(path));
  std::vector<std::pair<std::int64_t, double>> rows;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line_number == 1 || Trim(line).empty()) continue;
    const auto fields = SplitFields(Trim(line), ",");
    std::int64_t id = 0;
    double value = 0.0;
    if (fields.size() != 2 || !ParseInt64(fields[0], id) ||
        !ParseDouble(fields[1], value)) {
      throw ParseError(path.string(), line_number, "expected id,value");
    }
    rows.emplace_back(id, value);
  }
  return rows;
}

}  // namespace

LoadedPreferences LoadPreferences(const std::filesystem::path& dir,
                                  const SplitDataset& split,
                                  std::string_view split_hash) {
  LoadedPreferences loaded;
  auto& m = loaded.manifest;
  try {
    const auto j = nlohmann::json::parse(ReadFile(dir / "prefs.json"));
    m.model = j.at("model").get<std::string>();
    m.lambda1 = j.at("lambda1").get<double>();
    m.tol = j.at("tol").get<double>();
    m.max_iters = j.at("max_iters").get<int>();
    m.constant = j.at("constant").get<double>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.split_hash = j.at("split_hash").get<std::string>();
    if (!j.at("iterations").is_null()) m.iterations = j["iterations"].get<int>();
    if (!j.at("converged").is_null()) m.converged = j["converged"].get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad prefs.json in " + dir.string() + ": " + e.what());
  }
  if (m.split_hash != split_hash) {
    throw StaleArtifactError("preferences in " + dir.string() +
                             " were computed on a different split");
  }
  auto& prefs = loaded.prefs;
  prefs.model = ParsePreferenceModel(m.model);
  prefs.iterations = m.iterations;
  prefs.converged = m.converged;
  prefs.theta.assign(split.num_users(), -1.0);
  for (const auto& [id, value] : ReadIdValueCsv(dir / "theta.csv")) {
    const Index u = split.UserIndex(id);
    if (!(value >= 0.0 && value <= 1.0)) {
      throw DataError("theta for user " + std::to_string(id) +
                      " lies outside [0, 1]");
    }
    prefs.theta[u] = value;
  }
  for (Index u = 0; u < split.num_users(); ++u) {
    if (prefs.theta[u] < 0.0) {
      throw DataError("theta.csv has no row for user " +
                      std::to_string(split.user_id(u)));
    }
  }
  if (std::filesystem::exists(dir / "weights.csv")) {
    std::vector<double> weights(split.num_items(), 0.0);
    for (const auto& [id, value] : ReadIdValueCsv(dir / "weights.csv")) {
      weights[split.ItemIndex(id)] = value;
    }
    prefs.weights = std::move(weights);
  }
  return loaded;
}

}  // namespace ganc
