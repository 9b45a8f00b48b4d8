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

#include "ganc/metrics.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ganc/error.h"
#include "ganc/io.h"
#include "json.hpp"

namespace ganc {
namespace {

std::size_t CountHits(std::span<const Index> list,
                      const std::vector<Index>& relevant) {
  std::size_t hits = 0;
  for (Index i : list) {
    if (std::binary_search(relevant.begin(), relevant.end(), i)) ++hits;
  }
  return hits;
}

}  // namespace

PrecisionRecall PrecisionRecallAtN(const TopNCollection& collection,
                                   const SplitDataset& split, double threshold,
                                   std::vector<UserPrecisionRecall>* per_user) {
  PrecisionRecall out;
  if (per_user) per_user->clear();
  double recall_sum = 0.0;
  std::size_t users = 0;
  for (Index u = 0; u < collection.lists.size(); ++u) {
    const auto& list = collection.lists[u];
    if (list.empty()) continue;
    ++users;
    const auto relevant = RelevantTestItems(split, u, threshold);
    const std::size_t hits = CountHits(list, relevant);
    out.hits += hits;
    out.relevant += relevant.size();
    const double recall =
        relevant.empty() ? 0.0
                         : static_cast<double>(hits) /
                               static_cast<double>(relevant.size());
    recall_sum += recall;
    if (per_user) {
      per_user->push_back({split.user_id(u),
                           static_cast<double>(hits) /
                               static_cast<double>(list.size()),
                           recall});
    }
  }
  if (users == 0) throw UndefinedMetricError("no user received a list");
  out.precision = static_cast<double>(out.hits) /
                  (static_cast<double>(collection.n) * static_cast<double>(users));
  out.recall = recall_sum / static_cast<double>(users);
  const double sum = out.precision + out.recall;
  out.f_measure = sum > 0.0 ? 2.0 * out.precision * out.recall / sum : 0.0;
  return out;
}

double LtAccuracyAtN(const TopNCollection& collection, const ItemStats& stats) {
  std::size_t slots = 0;
  std::size_t tail = 0;
  for (const auto& list : collection.lists) {
    slots += list.size();
    for (Index i : list) tail += stats.InLongTail(i) ? 1 : 0;
  }
  if (slots == 0) throw UndefinedMetricError("no user received a list");
  return static_cast<double>(tail) / static_cast<double>(slots);
}

double StratRecallAtN(const TopNCollection& collection,
                      const SplitDataset& split, const ItemStats& stats,
                      double beta, double threshold) {
  if (beta < 0.0) throw ArgumentError("beta must be non-negative");
  const auto weight = [&](Index i) {
    const auto f = std::max<std::int64_t>(stats.popularity[i], 1);
    return std::pow(static_cast<double>(f), -beta);
  };
  double numerator = 0.0;
  double denominator = 0.0;
  for (Index u = 0; u < collection.lists.size(); ++u) {
    const auto& list = collection.lists[u];
    if (list.empty()) continue;
    const auto relevant = RelevantTestItems(split, u, threshold);
    for (Index i : relevant) denominator += weight(i);
    for (Index i : list) {
      if (std::binary_search(relevant.begin(), relevant.end(), i)) {
        numerator += weight(i);
      }
    }
  }
  if (denominator == 0.0) {
    throw UndefinedMetricError("no relevant test items for stratified recall");
  }
  return numerator / denominator;
}

double CoverageAtN(const TopNCollection& collection,
                   const SplitDataset& split) {
  if (split.num_items() == 0) throw UndefinedMetricError("empty item universe");
  std::vector<bool> seen(split.num_items(), false);
  std::size_t distinct = 0;
  for (const auto& list : collection.lists) {
    for (Index i : list) {
      if (!seen[i]) {
        seen[i] = true;
        ++distinct;
      }
    }
  }
  return static_cast<double>(distinct) /
         static_cast<double>(split.num_items());
}

double Gini(std::span<const std::int64_t> frequencies) {
  std::vector<std::int64_t> f(frequencies.begin(), frequencies.end());
  std::sort(f.begin(), f.end());
  std::int64_t total = 0;
  for (auto v : f) {
    if (v < 0) throw ArgumentError("frequencies must be non-negative");
    total += v;
  }
  if (total == 0) throw UndefinedMetricError("gini of all-zero frequencies");
  // Integer accumulation keeps uniform inputs exactly at zero.
  const auto m = static_cast<std::int64_t>(f.size());
  std::int64_t weighted = 0;
  for (std::int64_t j = 1; j <= m; ++j) weighted += (m + 1 - j) * f[j - 1];
  const double md = static_cast<double>(m);
  return (md + 1.0 - 2.0 * static_cast<double>(weighted) /
                         static_cast<double>(total)) /
         md;
}

EvalReport Evaluate(const TopNCollection& collection, const SplitDataset& split,
                    const ItemStats& stats, Protocol protocol, int n,
                    double beta, double threshold) {
  if (collection.protocol != protocol) {
    throw ContractError("collection was built under " +
                        std::string(ProtocolName(collection.protocol)) +
                        ", evaluation asked for " +
                        std::string(ProtocolName(protocol)));
  }
  if (collection.n != n) {
    throw ContractError("collection has n = " + std::to_string(collection.n) +
                        ", evaluation asked for " + std::to_string(n));
  }
  ValidateCollection(collection, split);
  EvalReport report;
  report.n = n;
  report.protocol = protocol;
  report.beta = beta;
  report.threshold = threshold;
  report.users = collection.NumAssigned();
  const auto pr =
      PrecisionRecallAtN(collection, split, threshold, &report.per_user);
  report.precision = pr.precision;
  report.recall = pr.recall;
  report.f_measure = pr.f_measure;
  report.lt_accuracy = LtAccuracyAtN(collection, stats);
  report.strat_recall = StratRecallAtN(collection, split, stats, beta,
                                       threshold);
  report.coverage = CoverageAtN(collection, split);
  const auto frequency = FrequenciesOf(collection, split.num_items());
  report.gini = Gini(frequency.counts());
  return report;
}

std::string ReportToJson(const EvalReport& report,
                         const std::string& split_hash) {
  nlohmann::json j = {
      {"n", report.n},
      {"protocol", std::string(ProtocolName(report.protocol))},
      {"beta", report.beta},
      {"threshold", report.threshold},
      {"users", report.users},
      {"precision", report.precision},
      {"recall", report.recall},
      {"f_measure", report.f_measure},
      {"lt_accuracy", report.lt_accuracy},
      {"strat_recall", report.strat_recall},
      {"coverage", report.coverage},
      {"gini", report.gini},
      {"split_hash", split_hash},
  };
  return j.dump(2) + "\n";
}

EvalReport ReportFromJson(const std::string& text, std::string* split_hash) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    EvalReport report;
    report.n = j.at("n").get<int>();
    report.protocol = ParseProtocol(j.at("protocol").get<std::string>());
    report.beta = j.at("beta").get<double>();
    report.threshold = j.at("threshold").get<double>();
    report.users = j.at("users").get<std::size_t>();
    report.precision = j.at("precision").get<double>();
    report.recall = j.at("recall").get<double>();
    report.f_measure = j.at("f_measure").get<double>();
    report.lt_accuracy = j.at("lt_accuracy").get<double>();
    report.strat_recall = j.at("strat_recall").get<double>();
    report.coverage = j.at("coverage").get<double>();
    report.gini = j.at("gini").get<double>();
    if (split_hash) *split_hash = j.value("split_hash", "");
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  }
}

std::string ReportToCsv(const EvalReport& report) {
  std::ostringstream out;
  out << "n,protocol,users,precision,recall,f_measure,lt_accuracy,"
         "strat_recall,coverage,gini\n";
  out << report.n << ',' << ProtocolName(report.protocol) << ','
      << report.users << ',' << FormatDouble(report.precision) << ','
      << FormatDouble(report.recall) << ',' << FormatDouble(report.f_measure)
      << ',' << FormatDouble(report.lt_accuracy) << ','
      << FormatDouble(report.strat_recall) << ','
      << FormatDouble(report.coverage) << ',' << FormatDouble(report.gini)
      << '\n';
  return out.str();
}

std::string PerUserCsv(const EvalReport& report) {
  std::ostringstream out;
  out << "user,precision,recall\n";
  for (const auto& row : report.per_user) {
    out << row.user << ',' << FormatDouble(row.precision) << ','
        << FormatDouble(row.recall) << '\n';
  }
  return out.str();
}

}  // namespace ganc
