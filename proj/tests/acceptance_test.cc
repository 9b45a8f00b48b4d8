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

// End-to-end acceptance checks on MovieLens 100K plus property sweeps on
// small random instances. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ganc/dataset.h"
#include "ganc/greedy.h"
#include "ganc/metrics.h"
#include "ganc/oracle.h"
#include "ganc/oslg.h"
#include "ganc/pipeline.h"
#include "ganc/preference.h"
#include "ganc/recommenders.h"
#include "test_util.h"

namespace ganc {
namespace {

constexpr int kN = 5;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Ml100k {
  std::vector<Rating> ratings;
  SplitDataset split;
  ItemStats stats;
  PreferenceVector generalized;
  MFModel rsvd;
};

std::string Fmt(double x, int digits = 4) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(digits);
  out << x;
  return out.str();
}

Outcome RsvdRmse(const Ml100k& d) {
  const double rmse = Rmse(d.rsvd, d.split, d.split.test());
  return {std::abs(rmse - 0.935) <= 0.02,
          "held-out RMSE " + Fmt(rmse) + ", expected 0.935 +/- 0.02"};
}

Outcome LongTailShare(const Ml100k& d) {
  bool pass = true;
  std::string detail = "L% by seed:";
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto split = SplitPerUser(d.ratings, {0.5, 20, seed});
    const auto stats = ComputeItemStats(split);
    const double share = 100.0 * static_cast<double>(stats.LongTailSize()) /
                         static_cast<double>(split.num_items());
    pass = pass && std::abs(share - 66.98) <= 1.5;
    detail += " " + Fmt(share, 2);
  }
  return {pass, detail + ", expected 66.98 +/- 1.5"};
}

Outcome ApproximationBound() {
  std::mt19937_64 rng(301);
  int ok = 0;
  double worst = 1.0;
  for (int trial = 0; trial < 100; ++trial) {
    auto inst = testing::RandomInstance(rng, 3, 6, 3);
    const int n = 1 + trial % 2;
    PreferenceVector prefs;
    prefs.theta = inst.theta;
    const auto greedy = LocallyGreedyFull(inst.split, prefs, inst.arec, n,
                                          UserOrder::kIncreasingTheta);
    const auto best = BruteForceOptimal(inst.split, inst.theta, inst.arec, n);
    const double value = CollectionValue(inst.split, inst.theta, inst.arec,
                                          greedy.collection.lists);
    if (value >= 0.5 * best.value) ++ok;
    worst = std::min(worst, value / best.value);
  }
  return {ok == 100, std::to_string(ok) + "/100 instances at >= half of " +
                         "optimum, worst ratio " + Fmt(worst)};
}

Outcome Submodularity() {
  std::mt19937_64 rng(302);
  int clean = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto inst = testing::RandomInstance(rng, 3 + trial % 2, 6, 3);
    const auto report = SubmodularityCheck(inst.split, inst.theta, inst.arec,
                                           20, static_cast<std::uint64_t>(trial));
    if (report.ok()) ++clean;
  }
  return {clean == 1000,
          std::to_string(clean) + "/1000 instances without a violation"};
}

Outcome OslgDegeneracy() {
  std::mt19937_64 rng(303);
  int same = 0;
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = testing::RandomInstance(rng, 10, 16, 8);
    PreferenceVector prefs;
    prefs.theta = inst.theta;
    OslgOptions options;
    options.n = 3;
    options.sample_size = inst.split.num_users();
    options.seed = static_cast<std::uint64_t>(trial);
    const auto oslg = Oslg(inst.split, prefs, inst.arec, options);
    const auto lg = LocallyGreedyFull(inst.split, prefs, inst.arec, 3,
                                      UserOrder::kIncreasingTheta);
    if (oslg.collection == lg.collection) ++same;
  }
  return {same == 20, std::to_string(same) + "/20 instances identical"};
}

Outcome PhaseFourDeterminism(const Ml100k& d) {
  PopScorer pop(d.split, d.stats, kN);
  OslgOptions options;
  options.n = kN;
  options.sample_size = 500;
  options.seed = 1;
  const auto base = Oslg(d.split, d.generalized, pop, options);
  options.phase4_order_seed = 11;
  const auto first = Oslg(d.split, d.generalized, pop, options);
  options.phase4_order_seed = 12;
  const auto second = Oslg(d.split, d.generalized, pop, options);
  options.phase4_order_seed.reset();
  options.workers = 8;
  const auto eight = Oslg(d.split, d.generalized, pop, options);
  const bool pass = base.collection == first.collection &&
                    base.collection == second.collection &&
                    base.collection == eight.collection;
  return {pass, "2 shuffled orders and 8 workers vs 1 on all " +
                    std::to_string(d.split.num_users()) + " users: " +
                    (pass ? "identical" : "different")};
}

EvalReport RunAndEvaluate(const Ml100k& d, const PreferenceVector& prefs,
                          const AccuracyScorer& arec, CrecKind crec,
                          Protocol protocol, std::uint64_t seed = 1) {
  RecommendConfig config;
  config.n = kN;
  config.s = 500;
  config.crec = crec;
  config.seed = seed;
  config.protocol = protocol;
  const auto result = Recommend(d.split, d.stats, prefs, arec, config);
  return Evaluate(result.collection, d.split, d.stats, protocol, kN);
}

Outcome CoverageTrend(const Ml100k& d) {
  PopScorer pop(d.split, d.stats, kN);
  const auto zero = ThetaConstant(d.split.num_users(), 0.0);
  const auto base =
      RunAndEvaluate(d, zero, pop, CrecKind::kStat, Protocol::kAllUnrated);
  const auto ganc = RunAndEvaluate(d, d.generalized, pop, CrecKind::kDyn,
                                   Protocol::kAllUnrated);
  const double f_change =
      std::abs(ganc.f_measure - base.f_measure) / base.f_measure;
  const bool pass = ganc.coverage >= 3.0 * base.coverage &&
                    ganc.gini < base.gini && f_change <= 0.4;
  return {pass, "Pop coverage " + Fmt(base.coverage) + " gini " +
                    Fmt(base.gini) + " F " + Fmt(base.f_measure) +
                    "; GANC coverage " + Fmt(ganc.coverage) + " gini " +
                    Fmt(ganc.gini) + " F " + Fmt(ganc.f_measure) +
                    " (F change " + Fmt(100.0 * f_change, 1) + "%)"};
}

Outcome SampleSizeTrend(const Ml100k& d) {
  PopScorer pop(d.split, d.stats, kN);
  RecommendConfig config;
  config.n = kN;
  config.seed = 1;
  const auto rows = Sweep(d.split, d.stats, d.generalized, pop, config,
                          {100, 500, 1000, 2000}, 10);
  bool pass = true;
  std::string detail = "mean coverage by S:";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (k > 0 && rows[k].coverage < 0.98 * rows[k - 1].coverage) pass = false;
    detail += " " + std::to_string(rows[k].s) + "(" +
              std::to_string(rows[k].s_effective) + ")=" +
              Fmt(rows[k].coverage);
  }
  return {pass, detail};
}

Outcome PreferenceDistribution(const Ml100k& d) {
  const auto g = SummarizePreferences(d.generalized);
  const auto n = SummarizePreferences(ThetaNormalizedLongTail(d.split, d.stats));
  const bool pass = g.mean > n.mean && g.variance > n.variance;
  return {pass, "generalized mean " + Fmt(g.mean) + " var " +
                    Fmt(g.variance, 5) + "; normalized mean " + Fmt(n.mean) +
                    " var " + Fmt(n.variance, 5)};
}

Outcome MetricSuite(const Ml100k& d) {
  bool pass = true;
  std::string detail;
  const std::vector<std::int64_t> uniform = {4, 4, 4, 4};
  const std::vector<std::int64_t> pair = {1, 3};
  pass = pass && Gini(uniform) == 0.0;
  pass = pass && std::abs(Gini(pair) - 0.25) < 1e-15;

  // Micro recall versus stratified recall at beta = 0 on a Pop run.
  PopScorer pop(d.split, d.stats, kN);
  const auto zero = ThetaConstant(d.split.num_users(), 0.0);
  const auto pop_lists = IndependentGreedy(d.split, zero, pop,
                                           StatCoverage(d.stats), kN,
                                           Protocol::kAllUnrated);
  const auto pr = PrecisionRecallAtN(pop_lists, d.split);
  const double micro =
      static_cast<double>(pr.hits) / static_cast<double>(pr.relevant);
  pass = pass &&
         std::abs(StratRecallAtN(pop_lists, d.split, d.stats, 0.0) - micro) <=
             1e-12;

  // A collection built only from long-tail items.
  TopNCollection tail;
  tail.n = kN;
  for (Index u = 0; u < d.split.num_users(); ++u) {
    std::vector<Index> list;
    for (Index i = 0; i < d.split.num_items() && list.size() < kN; ++i) {
      if (d.stats.InLongTail(i) && !d.split.RatedInTrain(u, i)) {
        list.push_back(i);
      }
    }
    tail.lists.push_back(list);
  }
  pass = pass && LtAccuracyAtN(tail, d.stats) == 1.0;
  detail = std::string("unit checks ") + (pass ? "ok" : "failed") +
           "; F rated_test_items vs all_unrated:";

  struct Model {
    std::string name;
    ArecKind kind;
    bool ganc;
  };
  const std::vector<Model> models = {
      {"Pop", ArecKind::kPop, false},
      {"RSVD", ArecKind::kRsvd, false},
      {"Rand", ArecKind::kRand, false},
      {"GANC(Pop)", ArecKind::kPop, true},
      {"GANC(RSVD)", ArecKind::kRsvd, true},
      {"GANC(Rand)", ArecKind::kRand, true},
  };
  for (const auto& model : models) {
    double f[2];
    int k = 0;
    for (Protocol protocol :
         {Protocol::kRatedTestItems, Protocol::kAllUnrated}) {
      ArecConfig config;
      config.kind = model.kind;
      config.seed = 1;
      const auto arec =
          BuildArec(d.split, d.stats, config, kN, protocol, &d.rsvd);
      const auto report = RunAndEvaluate(
          d, model.ganc ? d.generalized : zero, *arec.scorer,
          model.ganc ? CrecKind::kDyn : CrecKind::kStat, protocol);
      f[k++] = report.f_measure;
    }
    pass = pass && f[0] > f[1];
    detail += " " + model.name + " " + Fmt(f[0]) + ">" + Fmt(f[1]);
  }
  return {pass, detail};
}

}  // namespace
}  // namespace ganc

int main() {
  using namespace ganc;
  using Clock = std::chrono::steady_clock;
  const std::filesystem::path path = GANC_ML100K_PATH;
  if (!std::filesystem::exists(path)) {
    std::printf("FAIL setup: %s not found\n", path.string().c_str());
    return 1;
  }
  Ml100k d;
  d.ratings = LoadRatings(path, RatingFormat::kTabSeparated);
  d.split = SplitPerUser(d.ratings, {0.5, 20, 1});
  d.stats = ComputeItemStats(d.split);
  d.generalized = ThetaGeneralized(d.split);
  d.rsvd = RsvdTrain(d.split, {100, 0.05, 0.03, 30, 1});

  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks =
      {
          {"RSVD reproduction", [&] { return RsvdRmse(d); }},
          {"long-tail share", [&] { return LongTailShare(d); }},
          {"approximation bound", [] { return ApproximationBound(); }},
          {"submodularity", [] { return Submodularity(); }},
          {"OSLG degeneracy", [] { return OslgDegeneracy(); }},
          {"phase-4 determinism", [&] { return PhaseFourDeterminism(d); }},
          {"coverage/novelty trend", [&] { return CoverageTrend(d); }},
          {"sample-size trend", [&] { return SampleSizeTrend(d); }},
          {"preference distribution",
           [&] { return PreferenceDistribution(d); }},
          {"metric suite", [&] { return MetricSuite(d); }},
      };
  int failures = 0;
  for (std::size_t k = 0; k < checks.size(); ++k) {
    const auto start = Clock::now();
    Outcome outcome;
    try {
      outcome = checks[k].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("threw: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(Clock::now() - start).count();
    if (!outcome.pass) ++failures;
    std::printf("%s %zu %s: %s [%.2fs]\n", outcome.pass ? "PASS" : "FAIL",
                k + 1, checks[k].first.c_str(), outcome.detail.c_str(),
                seconds);
  }
  std::printf("%d of %zu criteria failed\n", failures, checks.size());
  return failures == 0 ? 0 : 1;
}
