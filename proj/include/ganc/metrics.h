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

// Top-N evaluation metrics. Averages run over the users that received a
// list: everyone under all_unrated, users with at least n test items under
// rated_test_items.

#ifndef GANC_METRICS_H_
#define GANC_METRICS_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ganc/dataset.h"
#include "ganc/greedy.h"

namespace ganc {

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  // Total |I_u^{T+} ∩ P_u| over users.
  std::size_t hits = 0;
  // Total |I_u^{T+}| over assigned users.
  std::size_t relevant = 0;
};

struct UserPrecisionRecall {
  UserId user = 0;
  double precision = 0.0;
  double recall = 0.0;

  friend bool operator==(const UserPrecisionRecall&,
                         const UserPrecisionRecall&) = default;
};

// precision = sum_u hits_u / (n |U|), recall = mean_u hits_u / |I_u^{T+}|
// with users lacking relevant items contributing 0, F = 2PR / (P + R).
// Throws UndefinedMetricError when no user has a list.
PrecisionRecall PrecisionRecallAtN(const TopNCollection& collection,
                                   const SplitDataset& split,
                                   double threshold = 4.0,
                                   std::vector<UserPrecisionRecall>* per_user =
                                       nullptr);

// Share of recommended slots taken by long-tail items.
double LtAccuracyAtN(const TopNCollection& collection, const ItemStats& stats);

// sum over hits of f_i^-beta divided by the same sum over all relevant test
// items, with zero popularity counted as 1. Throws UndefinedMetricError when
// no assigned user has a relevant test item.
double StratRecallAtN(const TopNCollection& collection,
                      const SplitDataset& split, const ItemStats& stats,
                      double beta = 0.5, double threshold = 4.0);

// Distinct recommended items over |I^R|.
double CoverageAtN(const TopNCollection& collection, const SplitDataset& split);

// Gini index of the frequencies, sorted ascending internally. Throws
// UndefinedMetricError when all frequencies are zero or the input is empty.
double Gini(std::span<const std::int64_t> frequencies);

struct EvalReport {
  int n = 0;
  Protocol protocol = Protocol::kAllUnrated;
  double beta = 0.5;
  double threshold = 4.0;
  std::size_t users = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  double lt_accuracy = 0.0;
  double strat_recall = 0.0;
  double coverage = 0.0;
  double gini = 0.0;
  std::vector<UserPrecisionRecall> per_user;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

// Throws ContractError when the collection was built for another protocol
// or list length, and validates the collection against the split.
EvalReport Evaluate(const TopNCollection& collection, const SplitDataset& split,
                    const ItemStats& stats, Protocol protocol, int n,
                    double beta = 0.5, double threshold = 4.0);

// JSON text of the aggregate report (per-user rows excluded).
std::string ReportToJson(const EvalReport& report,
                         const std::string& split_hash = "");
// Parses ReportToJson output. Returns the split hash through `split_hash`.
EvalReport ReportFromJson(const std::string& text,
                          std::string* split_hash = nullptr);
// Header plus one row.
std::string ReportToCsv(const EvalReport& report);
// `user,precision,recall` for every assigned user.
std::string PerUserCsv(const EvalReport& report);

}  // namespace ganc

#endif  // GANC_METRICS_H_
