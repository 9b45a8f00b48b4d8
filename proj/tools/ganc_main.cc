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

// ganc: split, prefs, train-rsvd, recommend, evaluate, sweep, stats.
//
// Every option lives on the top-level command so a flat `key = value` config
// file (--config) can hold the whole run; flags given on the command line
// override it. Exit codes: 0 ok, 1 usage, 2 data, 3 numerical or contract.

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ganc/dataset.h"
#include "ganc/error.h"
#include "ganc/greedy.h"
#include "ganc/io.h"
#include "ganc/metrics.h"
#include "ganc/pipeline.h"
#include "ganc/preference.h"
#include "ganc/recommenders.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace ganc {
namespace {

struct Options {
  // dataset
  std::string data;
  std::string format = "tab_separated";
  double kappa = 0.5;
  int tau = 20;
  std::uint64_t split_seed = 1;
  std::string split_dir = "out/split";
  // preferences
  std::string theta = "generalized";
  double lambda1 = 1.0;
  double tol = 1e-6;
  int max_iters = 100;
  double constant = 0.5;
  std::uint64_t theta_seed = 1;
  std::string prefs_dir = "out/prefs";
  // rsvd
  int factors = 100;
  double lambda = 0.05;
  double eta = 0.03;
  int epochs = 30;
  std::uint64_t rsvd_seed = 1;
  std::string model_dir = "out/model";
  // recommend
  std::string arec = "pop";
  int pop_n = 0;
  std::string scores;
  std::uint64_t arec_seed = 1;
  std::string crec = "dyn";
  int n = 5;
  std::size_t s = 500;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string protocol = "all_unrated";
  std::string out = "out/run";
  // evaluate
  std::string topn;
  double beta = 0.5;
  double threshold = 4.0;
  // sweep
  std::vector<std::size_t> s_values = {100, 500, 1000, 2000};
  int repetitions = 10;
  // stats
  int bins = 10;
};

void AddOptions(CLI::App& app, Options& o) {
  app.add_option("--data", o.data, "Rating file");
  app.add_option("--format", o.format,
                 "tab_separated | double_colon | csv")->capture_default_str();
  app.add_option("--kappa", o.kappa, "Train share per user")
      ->capture_default_str();
  app.add_option("--tau", o.tau, "Minimum ratings per user")
      ->capture_default_str();
  app.add_option("--split-seed", o.split_seed)->capture_default_str();
  app.add_option("--split-dir", o.split_dir)->capture_default_str();

  app.add_option("--theta", o.theta,
                 "activity | normalized | tfidf | generalized | constant | "
                 "random")
      ->capture_default_str();
  app.add_option("--lambda1", o.lambda1)->capture_default_str();
  app.add_option("--tol", o.tol)->capture_default_str();
  app.add_option("--max-iters", o.max_iters)->capture_default_str();
  app.add_option("--constant", o.constant)->capture_default_str();
  app.add_option("--theta-seed", o.theta_seed)->capture_default_str();
  app.add_option("--prefs-dir", o.prefs_dir)->capture_default_str();

  app.add_option("--factors", o.factors)->capture_default_str();
  app.add_option("--lambda", o.lambda)->capture_default_str();
  app.add_option("--eta", o.eta)->capture_default_str();
  app.add_option("--epochs", o.epochs)->capture_default_str();
  app.add_option("--rsvd-seed", o.rsvd_seed)->capture_default_str();
  app.add_option("--model-dir", o.model_dir)->capture_default_str();

  app.add_option("--arec", o.arec, "pop | rsvd | external | rand")
      ->capture_default_str();
  app.add_option("--pop-n", o.pop_n, "Pop list length (0: use --n)")
      ->capture_default_str();
  app.add_option("--scores", o.scores, "user,item,score file for external");
  app.add_option("--arec-seed", o.arec_seed)->capture_default_str();
  app.add_option("--crec", o.crec, "dyn | stat | rand")->capture_default_str();
  app.add_option("--n", o.n, "List length")->capture_default_str();
  app.add_option("--s", o.s, "OSLG sample size")->capture_default_str();
  app.add_option("--seed", o.seed, "Run seed")->capture_default_str();
  app.add_option("--workers", o.workers)->capture_default_str();
  app.add_option("--protocol", o.protocol, "all_unrated | rated_test_items")
      ->capture_default_str();
  app.add_option("--out", o.out, "Output directory")->capture_default_str();

  app.add_option("--topn", o.topn, "topn.csv to evaluate (default <out>)");
  app.add_option("--beta", o.beta)->capture_default_str();
  app.add_option("--threshold", o.threshold)->capture_default_str();

  app.add_option("--s-values", o.s_values)->delimiter(',')
      ->capture_default_str();
  app.add_option("--repetitions", o.repetitions)->capture_default_str();
  app.add_option("--bins", o.bins)->capture_default_str();
}

std::string Percent(double x) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(2);
  out << x;
  return out.str();
}

LoadedSplit RequireSplit(const Options& o) {
  return LoadSplit(o.split_dir);
}

void PrintSummary(const DatasetSummary& s) {
  std::cout << "|D| " << s.ratings << "\n|U| " << s.users << "\n|I| "
            << s.items << "\ndensity% " << Percent(s.density_percent)
            << "\nL% " << Percent(s.long_tail_percent) << "\n";
}

int CmdSplit(const Options& o) {
  if (o.data.empty()) throw ArgumentError("--data is required");
  const auto ratings = LoadRatings(o.data, ParseRatingFormat(o.format));
  SplitOptions options{o.kappa, o.tau, o.split_seed};
  const auto split = SplitPerUser(ratings, options);
  const auto stats = ComputeItemStats(split);
  SplitManifest manifest;
  manifest.options = options;
  manifest.source = o.data;
  manifest.summary = Summarize(ratings, o.tau, stats);
  manifest = SaveSplit(o.split_dir, split, manifest);
  PrintSummary(manifest.summary);
  std::cout << "train " << manifest.train_ratings << "\ntest "
            << manifest.test_ratings << "\nsplit_hash " << manifest.split_hash
            << "\n";
  return 0;
}

PreferenceConfig MakePreferenceConfig(const Options& o) {
  PreferenceConfig config;
  config.model = ParsePreferenceModel(o.theta);
  config.generalized = {o.lambda1, o.tol, o.max_iters};
  config.constant = o.constant;
  config.seed = o.theta_seed;
  return config;
}

int CmdPrefs(const Options& o) {
  const auto config = MakePreferenceConfig(o);
  const auto loaded = RequireSplit(o);
  const auto stats = ComputeItemStats(loaded.split);
  const auto prefs = BuildPreferences(loaded.split, stats, config);
  PreferenceManifest manifest;
  manifest.model = std::string(PreferenceModelName(prefs.model));
  manifest.lambda1 = o.lambda1;
  manifest.tol = o.tol;
  manifest.max_iters = o.max_iters;
  manifest.iterations = prefs.iterations;
  manifest.converged = prefs.converged;
  manifest.constant = o.constant;
  manifest.seed = o.theta_seed;
  manifest.split_hash = loaded.manifest.split_hash;
  SavePreferences(o.prefs_dir, loaded.split, prefs, manifest);

  const auto summary = SummarizePreferences(prefs);
  std::cout << "model " << manifest.model << "\nmean "
            << FormatDouble(summary.mean) << "\nvariance "
            << FormatDouble(summary.variance) << "\n";
  if (prefs.iterations) std::cout << "iterations " << *prefs.iterations << "\n";
  if (prefs.converged) {
    std::cout << "converged " << (*prefs.converged ? "true" : "false") << "\n";
  }
  std::cout << "histogram";
  for (auto c : summary.histogram) std::cout << ' ' << c;
  std::cout << "\n";
  return 0;
}

int CmdTrainRsvd(const Options& o) {
  const auto loaded = RequireSplit(o);
  RsvdOptions options{o.factors, o.lambda, o.eta, o.epochs, o.rsvd_seed};
  const auto model = RsvdTrain(loaded.split, options);
  ModelManifest manifest;
  manifest.options = options;
  manifest.train_rmse = Rmse(model, loaded.split, loaded.split.train());
  manifest.test_rmse = loaded.split.test().empty()
                           ? 0.0
                           : Rmse(model, loaded.split, loaded.split.test());
  manifest.split_hash = loaded.manifest.split_hash;
  SaveModel(o.model_dir, loaded.split, model, manifest);
  std::cout << "train_rmse " << FormatDouble(manifest.train_rmse)
            << "\ntest_rmse " << FormatDouble(manifest.test_rmse) << "\n";
  return 0;
}

struct RunInputs {
  LoadedSplit split;
  ItemStats stats;
  PreferenceVector prefs;
  std::string theta_name;
  ArecHandle arec;
  RecommendConfig config;
};

RunInputs LoadRunInputs(const Options& o) {
  RunInputs in;
  in.config.n = o.n;
  in.config.s = o.s;
  in.config.crec = ParseCrecKind(o.crec);
  in.config.seed = o.seed;
  in.config.workers = o.workers;
  in.config.protocol = ParseProtocol(o.protocol);
  ArecConfig arec;
  arec.kind = ParseArecKind(o.arec);
  if (o.pop_n > 0) arec.pop_n = o.pop_n;
  arec.external_path = o.scores;
  arec.seed = o.arec_seed;
  if (arec.kind == ArecKind::kExternal && o.scores.empty()) {
    throw ArgumentError("--scores is required for arec external");
  }

  in.split = RequireSplit(o);
  const auto& hash = in.split.manifest.split_hash;
  in.stats = ComputeItemStats(in.split.split);
  auto loaded_prefs = LoadPreferences(o.prefs_dir, in.split.split, hash);
  in.prefs = std::move(loaded_prefs.prefs);
  in.theta_name = loaded_prefs.manifest.model;
  std::optional<LoadedModel> model;
  if (arec.kind == ArecKind::kRsvd) {
    model = LoadModel(o.model_dir, in.split.split, hash);
  }
  in.arec = BuildArec(in.split.split, in.stats, arec, o.n,
                      in.config.protocol, model ? &model->model : nullptr);
  return in;
}

int CmdRecommend(const Options& o) {
  auto in = LoadRunInputs(o);
  const auto result = Recommend(in.split.split, in.stats, in.prefs,
                                *in.arec.scorer, in.config);
  ValidateCollection(result.collection, in.split.split);

  std::string crec_name(CrecKindName(in.config.crec));
  crec_name[0] = static_cast<char>(std::toupper(crec_name[0]));
  const auto name = GancName(in.arec.scorer->Name(), in.theta_name, crec_name);
  nlohmann::json run = {
      {"template", name},
      {"arec", o.arec},
      {"theta", in.theta_name},
      {"crec", o.crec},
      {"n", o.n},
      {"s", o.s},
      {"s_effective", result.s_effective},
      {"seed", o.seed},
      {"workers", o.workers},
      {"protocol", o.protocol},
      {"users_assigned", result.collection.NumAssigned()},
      {"split_hash", in.split.manifest.split_hash},
      {"seconds",
       {{"sample", result.sample_seconds},
        {"sequential", result.sequential_seconds},
        {"parallel", result.parallel_seconds},
        {"total", result.total_seconds}}},
  };
  fs::create_directories(o.out);
  SaveTopN(fs::path(o.out) / "topn.csv", in.split.split, result.collection);
  WriteFileAtomic(fs::path(o.out) / "run.json", run.dump(2) + "\n");
  std::cout << name << "\nusers " << result.collection.NumAssigned()
            << "\nseconds " << FormatDouble(result.total_seconds) << "\n";
  return 0;
}

int CmdEvaluate(const Options& o) {
  const auto loaded = RequireSplit(o);
  const auto& split = loaded.split;
  const auto protocol = ParseProtocol(o.protocol);
  const fs::path topn = o.topn.empty() ? fs::path(o.out) / "topn.csv"
                                       : fs::path(o.topn);
  const auto run_path = topn.parent_path() / "run.json";
  if (fs::exists(run_path)) {
    nlohmann::json run;
    try {
      run = nlohmann::json::parse(ReadFile(run_path));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(run_path.string() + ": " + e.what());
    }
    if (run.value("split_hash", "") != loaded.manifest.split_hash) {
      throw StaleArtifactError(run_path.string() +
                               " was produced from a different split");
    }
    if (run.value("protocol", o.protocol) != o.protocol) {
      throw ContractError("collection was built under " +
                          run.value("protocol", std::string()) +
                          ", evaluation asked for " + o.protocol);
    }
    if (run.value("n", o.n) != o.n) {
      throw ContractError("collection has n = " +
                          std::to_string(run.value("n", 0)) +
                          ", evaluation asked for " + std::to_string(o.n));
    }
  }
  const auto stats = ComputeItemStats(split);
  const auto collection = LoadTopN(topn, split, o.n, protocol);
  const auto report =
      Evaluate(collection, split, stats, protocol, o.n, o.beta, o.threshold);
  fs::create_directories(o.out);
  WriteFileAtomic(fs::path(o.out) / "report.json",
                  ReportToJson(report, loaded.manifest.split_hash));
  WriteFileAtomic(fs::path(o.out) / "report.csv", ReportToCsv(report));
  WriteFileAtomic(fs::path(o.out) / "per_user.csv", PerUserCsv(report));
  std::cout << ReportToCsv(report);
  return 0;
}

int CmdSweep(const Options& o) {
  auto in = LoadRunInputs(o);
  const auto rows = Sweep(in.split.split, in.stats, in.prefs, *in.arec.scorer,
                          in.config, o.s_values, o.repetitions);
  fs::create_directories(o.out);
  const auto csv = SweepToCsv(rows);
  WriteFileAtomic(fs::path(o.out) / "sweep.csv", csv);
  std::cout << csv;
  return 0;
}

int CmdStats(const Options& o) {
  const auto loaded = RequireSplit(o);
  const auto stats = ComputeItemStats(loaded.split);
  PrintSummary(loaded.manifest.summary);
  std::ostringstream csv;
  csv << "bin_center,mean_popularity,users\n";
  for (const auto& bin : ActivityPopularityProfile(loaded.split, o.bins)) {
    csv << FormatDouble(bin.center) << ',' << FormatDouble(bin.mean_popularity)
        << ',' << bin.users << '\n';
  }
  fs::create_directories(o.out);
  WriteFileAtomic(fs::path(o.out) / "activity.csv", csv.str());
  std::cout << "long_tail_items " << stats.LongTailSize() << "\n" << csv.str();
  return 0;
}

}  // namespace
}  // namespace ganc

int main(int argc, char** argv) {
  using namespace ganc;
  CLI::App app{"Long-tail aware top-N re-ranking"};
  app.set_config("--config", "", "Flat key = value config file");
  app.require_subcommand(1);
  app.fallthrough();
  Options options;
  AddOptions(app, options);

  int (*action)(const Options&) = nullptr;
  const auto command = [&](const char* name, const char* help,
                           int (*fn)(const Options&)) {
    app.add_subcommand(name, help)->callback([&action, fn] { action = fn; });
  };
  command("split", "Split ratings into train/test and print dataset stats",
          CmdSplit);
  command("prefs", "Estimate long-tail novelty preferences", CmdPrefs);
  command("train-rsvd", "Train the matrix factorization model", CmdTrainRsvd);
  command("recommend", "Build top-N lists with GANC", CmdRecommend);
  command("evaluate", "Score a top-N collection", CmdEvaluate);
  command("sweep", "Vary the OSLG sample size", CmdSweep);
  command("stats", "Activity versus popularity profile", CmdStats);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  try {
    return action(options);
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
