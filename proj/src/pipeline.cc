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

#include "ganc/pipeline.h"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "ganc/error.h"
#include "ganc/io.h"
#include "ganc/oslg.h"

namespace ganc {

PreferenceVector BuildPreferences(const SplitDataset& split,
                                  const ItemStats& stats,
                                  const PreferenceConfig& config) {
  switch (config.model) {
    case PreferenceModel::kActivity:
      return ThetaActivity(split);
    case PreferenceModel::kNormalizedLongTail:
      return ThetaNormalizedLongTail(split, stats);
    case PreferenceModel::kTfidf:
      return ThetaTfidf(split);
    case PreferenceModel::kGeneralized:
      return ThetaGeneralized(split, config.generalized);
    case PreferenceModel::kConstant:
      return ThetaConstant(split.num_users(), config.constant);
    case PreferenceModel::kRandom:
      return ThetaRandom(split.num_users(), config.seed);
  }
  throw ArgumentError("unknown preference model");
}

ArecKind ParseArecKind(std::string_view name) {
  if (name == "pop") return ArecKind::kPop;
  if (name == "rsvd") return ArecKind::kRsvd;
  if (name == "external") return ArecKind::kExternal;
  if (name == "rand") return ArecKind::kRand;
  throw ArgumentError("unknown arec '" + std::string(name) +
                      "' (expected pop, rsvd, external or rand)");
}

std::string_view ArecKindName(ArecKind kind) {
  switch (kind) {
    case ArecKind::kPop: return "pop";
    case ArecKind::kRsvd: return "rsvd";
    case ArecKind::kExternal: return "external";
    case ArecKind::kRand: return "rand";
  }
  return "?";
}

CrecKind ParseCrecKind(std::string_view name) {
  if (name == "dyn") return CrecKind::kDyn;
  if (name == "stat") return CrecKind::kStat;
  if (name == "rand") return CrecKind::kRand;
  throw ArgumentError("unknown crec '" + std::string(name) +
                      "' (expected dyn, stat or rand)");
}

std::string_view CrecKindName(CrecKind kind) {
  switch (kind) {
    case CrecKind::kDyn: return "dyn";
    case CrecKind::kStat: return "stat";
    case CrecKind::kRand: return "rand";
  }
  return "?";
}

ArecHandle BuildArec(const SplitDataset& split, const ItemStats& stats,
                     const ArecConfig& config, int n, Protocol protocol,
                     const MFModel* model) {
  ArecHandle handle;
  switch (config.kind) {
    case ArecKind::kPop:
      handle.scorer = std::make_unique<PopScorer>(
          split, stats, config.pop_n.value_or(n), protocol);
      break;
    case ArecKind::kRsvd:
      if (!model) throw ArgumentError("arec rsvd needs a trained model");
      handle.model = std::make_unique<MFModel>(*model);
      handle.scorer = std::make_unique<MFScorer>(*handle.model, split);
      break;
    case ArecKind::kExternal:
      handle.scorer =
          std::make_unique<ExternalScorer>(config.external_path, split);
      break;
    case ArecKind::kRand:
      handle.scorer = std::make_unique<RandomScorer>(config.seed);
      break;
  }
  return handle;
}

RecommendResult Recommend(const SplitDataset& split, const ItemStats& stats,
                          const PreferenceVector& prefs,
                          const AccuracyScorer& arec,
                          const RecommendConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  RecommendResult result;
  if (config.crec == CrecKind::kDyn) {
    const std::size_t eligible =
        EligibleUsers(split, config.n, config.protocol).size();
    OslgOptions options;
    options.n = config.n;
    options.sample_size = std::min(config.s, eligible);
    options.seed = config.seed;
    options.workers = config.workers;
    options.protocol = config.protocol;
    auto oslg = Oslg(split, prefs, arec, options);
    result.collection = std::move(oslg.collection);
    result.s_effective = options.sample_size;
    result.sample_seconds = oslg.sample_seconds;
    result.sequential_seconds = oslg.sequential_seconds;
    result.parallel_seconds = oslg.parallel_seconds;
  } else {
    std::unique_ptr<CoverageScorer> crec;
    if (config.crec == CrecKind::kStat) {
      crec = std::make_unique<StatCoverage>(stats);
    } else {
      crec = std::make_unique<RandCoverage>(split.num_items(), config.seed);
    }
    const auto parallel_start = std::chrono::steady_clock::now();
    result.collection = IndependentGreedy(split, prefs, arec, *crec, config.n,
                                          config.protocol, config.workers);
    result.parallel_seconds = std::chrono::duration<double>(
                                  std::chrono::steady_clock::now() -
                                  parallel_start)
                                  .count();
  }
  result.total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

std::string GancName(std::string_view arec, std::string_view theta,
                     std::string_view crec) {
  return "GANC(" + std::string(arec) + ", " + std::string(theta) + ", " +
         std::string(crec) + ")";
}

std::vector<SweepRow> Sweep(const SplitDataset& split, const ItemStats& stats,
                            const PreferenceVector& prefs,
                            const AccuracyScorer& arec,
                            const RecommendConfig& config,
                            const std::vector<std::size_t>& s_values,
                            int repetitions) {
  if (config.crec != CrecKind::kDyn) {
    throw ArgumentError("a sample-size sweep needs crec = dyn");
  }
  if (repetitions < 1) throw ArgumentError("repetitions must be positive");
  std::vector<SweepRow> rows;
  for (std::size_t s : s_values) {
    SweepRow row;
    row.s = s;
    row.repetitions = repetitions;
    for (int r = 0; r < repetitions; ++r) {
      auto run = config;
      run.s = s;
      run.seed = config.seed + static_cast<std::uint64_t>(r);
      const auto result = Recommend(split, stats, prefs, arec, run);
      const auto report =
          Evaluate(result.collection, split, stats, run.protocol, run.n);
      row.s_effective = result.s_effective;
      row.f_measure += report.f_measure;
      row.coverage += report.coverage;
      row.gini += report.gini;
      row.lt_accuracy += report.lt_accuracy;
    }
    const double reps = static_cast<double>(repetitions);
    row.f_measure /= reps;
    row.coverage /= reps;
    row.gini /= reps;
    row.lt_accuracy /= reps;
    rows.push_back(row);
  }
  return rows;
}

std::string SweepToCsv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "s,s_effective,repetitions,f_measure,coverage,gini,lt_accuracy\n";
  for (const auto& row : rows) {
    out << row.s << ',' << row.s_effective << ',' << row.repetitions << ','
        << FormatDouble(row.f_measure) << ',' << FormatDouble(row.coverage)
        << ',' << FormatDouble(row.gini) << ','
        << FormatDouble(row.lt_accuracy) << '\n';
  }
  return out.str();
}

}  // namespace ganc
