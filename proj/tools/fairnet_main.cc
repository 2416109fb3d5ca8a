// Copyright 2026 The fairnet Authors.
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

// fairnet command-line driver.
//
//   fairnet solve     --scenario F [--flows]
//   fairnet analyze   --scenario F --profile "S1=50,50;S2=34,33,33"
//   fairnet validate  --scenario F
//   fairnet learn     [--config F] [--scenario F] [flags] [--verify]
//   fairnet sweep     [--config F] --ratios 1/5,1,5 [flags]
//   fairnet calibrate [--min 1 --max 20] [--write-scenarios DIR]
//
// Exit codes: 0 success, 1 usage or input error, 2 runtime failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fairnet/experiment.h"
#include "fairnet/game.h"
#include "fairnet/scenario_io.h"
#include "fairnet/scenarios.h"

namespace fairnet {
namespace {

struct LearnFlags {
  std::string config;
  std::string scenario;
  std::string name;
  std::optional<std::int64_t> steps;
  std::optional<std::int64_t> seeds;
  std::optional<std::uint64_t> master_seed;
  std::optional<double> alpha;
  std::optional<double> alpha_mean;
  std::string alpha_ratio;
  std::optional<double> gamma;
  std::optional<double> eps0;
  std::optional<double> eps_min;
  std::optional<double> tau;
  std::optional<int> window;
  std::string out;
  bool allow_uncertified = false;
  std::optional<int> jobs;
  std::string ratios;
  bool verify = false;
};

void AddLearnFlags(CLI::App* cmd, LearnFlags& f, bool sweep) {
  cmd->add_option("--config", f.config, "YAML experiment config or run manifest");
  cmd->add_option("--scenario", f.scenario, "scenario file");
  cmd->add_option("--name", f.name, "experiment name (output subdirectory)");
  cmd->add_option("--steps", f.steps, "time steps per seed");
  cmd->add_option("--seeds", f.seeds, "number of seeds");
  cmd->add_option("--master-seed", f.master_seed, "master seed");
  cmd->add_option("--alpha", f.alpha, "learning rate shared by all groups");
  cmd->add_option("--alpha-mean", f.alpha_mean, "mean learning rate in ratio mode");
  if (!sweep) cmd->add_option("--alpha-ratio", f.alpha_ratio, "first:second learning-rate ratio, e.g. 5/1");
  cmd->add_option("--gamma", f.gamma, "discount factor");
  cmd->add_option("--eps0", f.eps0, "initial exploration rate");
  cmd->add_option("--eps-min", f.eps_min, "exploration floor");
  cmd->add_option("--tau", f.tau, "exploration decay constant (default steps/5)");
  cmd->add_option("--window", f.window, "smoothing window");
  cmd->add_option("--out", f.out, "output root (default $FAIRNET_OUT_ROOT or ./runs)");
  cmd->add_flag("--allow-uncertified", f.allow_uncertified,
                "accept a local-search optimum when enumeration is too large");
  cmd->add_option("--jobs", f.jobs, "worker threads");
  if (sweep) {
    cmd->add_option("--ratios", f.ratios, "comma-separated ratios, e.g. 1/5,1,5");
  } else {
    cmd->add_flag("--verify", f.verify, "rerun a manifest and compare output hashes");
  }
}

ExperimentConfig ResolveConfig(const LearnFlags& f) {
  ExperimentConfig c = f.config.empty() ? ExperimentConfig{} : LoadConfig(f.config);
  if (!f.scenario.empty()) {
    c.scenario = f.scenario;
    c.scenario_text.reset();
  }
  if (!f.name.empty()) c.name = f.name;
  if (f.steps) c.steps = *f.steps;
  if (f.seeds) c.seeds = *f.seeds;
  if (f.master_seed) c.master_seed = *f.master_seed;
  if (f.alpha) {
    c.alpha = *f.alpha;
    c.alpha_mode = AlphaMode::kUniform;
  }
  if (f.alpha_mean) c.alpha_mean = *f.alpha_mean;
  try {
    if (!f.alpha_ratio.empty()) {
      c.alpha_ratio = ParseRational(f.alpha_ratio);
      c.alpha_mode = AlphaMode::kRatio;
    }
    if (!f.ratios.empty()) {
      c.ratios.clear();
      std::stringstream ss(f.ratios);
      for (std::string item; std::getline(ss, item, ',');) c.ratios.push_back(ParseRational(item));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (f.gamma) c.gamma = *f.gamma;
  if (f.eps0) c.eps0 = *f.eps0;
  if (f.eps_min) c.eps_min = *f.eps_min;
  if (f.tau) c.tau = *f.tau;
  if (f.window) c.window = *f.window;
  if (!f.out.empty()) c.out = f.out;
  if (f.allow_uncertified) c.allow_uncertified = true;
  if (f.jobs) c.jobs = *f.jobs;
  c.Validate();
  return c;
}

void PrintRunSummary(const ExperimentRun& run, const std::filesystem::path& dir) {
  const AggregateTrajectory& a = run.aggregate;
  const std::size_t tail = std::max<std::size_t>(1, a.pol.size() / 10);
  std::vector<double> pol, sd;
  for (const auto& p : a.pol) pol.push_back(p.mean);
  for (const auto& p : a.sd) sd.push_back(p.mean);
  std::printf("run %s: %zu seeds x %zu steps, alphas", run.run_id.c_str(), run.seed_list.size(),
              a.pol.size());
  for (double x : run.alphas) std::printf(" %.6g", x);
  std::printf("\n  SO %s%s, final-decile PoL %.4f, SD %.4f\n  wrote %s\n",
              FormatDecimal(run.optimum.total_cost, 4).c_str(),
              run.optimum.certified ? "" : " (uncertified)", TailMean(pol, tail),
              TailMean(sd, tail), dir.string().c_str());
}

int CmdLearn(const LearnFlags& f) {
  const ExperimentConfig c = ResolveConfig(f);
  const ExperimentRun run = RunExperiment(c);
  if (f.verify) {
    if (c.recorded_outputs.empty()) throw ConfigError("--verify needs a manifest with outputs");
    std::map<std::string, std::string> fresh;
    for (std::size_t k = 0; k < run.trajectories.size(); ++k) {
      fresh["seed_" + std::to_string(k) + ".csv"] = Sha256Hex(SeedCsv(run, k));
    }
    fresh["aggregate.csv"] = Sha256Hex(AggregateCsv(run));
    int mismatches = 0;
    for (const auto& [file, hash] : c.recorded_outputs) {
      const auto it = fresh.find(file);
      const bool ok = it != fresh.end() && it->second == hash;
      if (!ok) {
        ++mismatches;
        std::printf("MISMATCH %s\n", file.c_str());
      }
    }
    if (fresh.size() != c.recorded_outputs.size()) ++mismatches;
    std::printf("verify: %zu files, %d mismatches\n", c.recorded_outputs.size(), mismatches);
    return mismatches == 0 ? kExitOk : kExitRuntime;
  }
  const auto dir = RunDirectory(c);
  WriteRun(run, dir);
  PrintRunSummary(run, dir);
  return kExitOk;
}

int CmdSweep(const LearnFlags& f) {
  const ExperimentConfig base = ResolveConfig(f);
  for (const ExperimentConfig& c : SweepConfigs(base)) {
    const ExperimentRun run = RunExperiment(c);
    const auto dir = RunDirectory(c);
    WriteRun(run, dir);
    PrintRunSummary(run, dir);
  }
  return kExitOk;
}

int CmdSolve(const std::string& scenario, bool flows, std::int64_t budget) {
  const Network net = LoadValidScenario(scenario);
  std::cout << FormatSolveReport(Solve(net, budget), flows);
  return kExitOk;
}

int CmdAnalyze(const std::string& scenario, const std::string& profile) {
  const Network net = LoadValidScenario(scenario);
  AggregateProfile prof;
  try {
    prof = ParseProfile(net, profile);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  std::cout << FormatCostReport(net, prof, Analyze(net, prof));
  return kExitOk;
}

int CmdValidate(const std::string& scenario) {
  Network net;
  try {
    net = LoadScenario(scenario);
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitUsage;
  }
  const auto violations = ValidateNetwork(net);
  for (const auto& v : violations) std::fprintf(stderr, "%s: %s\n", scenario.c_str(), v.c_str());
  if (!violations.empty()) return kExitUsage;
  std::size_t strategies = 0;
  for (const auto& g : net.groups()) strategies += g.strategies.size();
  std::printf("%s: ok (%zu nodes, %zu edges, %zu groups, %zu strategies, %s profiles)\n",
              scenario.c_str(), net.nodes().size(), net.edges().size(), net.groups().size(),
              strategies, std::to_string(CountProfiles(net)).c_str());
  return kExitOk;
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

int CmdCalibrate(std::int64_t lo, std::int64_t hi, const std::string& write_dir) {
  if (lo < 1 || hi < lo) throw ConfigError("need 1 <= --min <= --max");
  const CalibrationResult result = CalibrateAmsterdam(CalibrationSpace::Uniform(lo, hi));
  const std::string report = FormatCalibrationReport(result);
  std::cout << report;
  if (write_dir.empty()) return kExitOk;
  std::filesystem::create_directories(write_dir);
  for (const ScenarioPreset& p : Presets()) {
    const Network net = BuildPreset(p.name, result.t0);
    WriteText(std::filesystem::path(write_dir) / p.file, SerializeScenario(net, p.notes));
  }
  WriteText(std::filesystem::path(write_dir) / "amsterdam_calibration.txt", report);
  return kExitOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"Selfish routing with heterogeneous learners"};
  app.require_subcommand(1);

  std::string scenario, profile, write_dir;
  bool flows = false;
  std::int64_t budget = kDefaultEnumerationBudget;
  std::int64_t cal_min = 1, cal_max = 20;

  auto* solve = app.add_subcommand("solve", "equilibrium, optimum, price of anarchy");
  solve->add_option("--scenario", scenario, "scenario file")->required();
  solve->add_flag("--flows", flows, "print edge loads at the worst equilibrium");
  solve->add_option("--budget", budget, "enumeration budget for the optimum");

  auto* analyze = app.add_subcommand("analyze", "costs of a given profile");
  analyze->add_option("--scenario", scenario, "scenario file")->required();
  analyze->add_option("--profile", profile, "e.g. S1=50,50;S2=34,33,33")->required();

  auto* validate = app.add_subcommand("validate", "check a scenario file");
  validate->add_option("--scenario", scenario, "scenario file")->required();

  LearnFlags learn_flags, sweep_flags;
  auto* learn = app.add_subcommand("learn", "multi-seed Q-learning run");
  AddLearnFlags(learn, learn_flags, false);
  auto* sweep = app.add_subcommand("sweep", "learning-rate ratio sweep");
  AddLearnFlags(sweep, sweep_flags, true);

  auto* calibrate = app.add_subcommand("calibrate", "fit metro free-flow times");
  calibrate->add_option("--min", cal_min, "smallest candidate t0");
  calibrate->add_option("--max", cal_max, "largest candidate t0");
  calibrate->add_option("--write-scenarios", write_dir, "write all preset scenarios here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve) return CmdSolve(scenario, flows, budget);
    if (*analyze) return CmdAnalyze(scenario, profile);
    if (*validate) return CmdValidate(scenario);
    if (*learn) return CmdLearn(learn_flags);
    if (*sweep) return CmdSweep(sweep_flags);
    if (*calibrate) return CmdCalibrate(cal_min, cal_max, write_dir);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const UncertifiedOptimumError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "fatal: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace
}  // namespace fairnet

int main(int argc, char** argv) { return fairnet::Main(argc, argv); }
