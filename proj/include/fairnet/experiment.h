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

#ifndef FAIRNET_EXPERIMENT_H_
#define FAIRNET_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairnet/metrics.h"
#include "fairnet/network.h"
#include "fairnet/rational.h"
#include "fairnet/solvers.h"

namespace fairnet {

// Bad flags, config files or scenario files (exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

enum class AlphaMode { kUniform, kRatio };

struct ExperimentConfig {
  std::string name = "run";
  std::string scenario;  // path to a .scn file
  std::int64_t steps = 10000;
  std::int64_t seeds = 40;
  std::uint64_t master_seed = 0;
  AlphaMode alpha_mode = AlphaMode::kUniform;
  double alpha = 0.2;
  double alpha_mean = 0.2;
  Rational alpha_ratio{1};
  double gamma = 0.0;
  double eps0 = 1.0;
  double eps_min = 0.01;
  std::optional<double> tau;  // steps / 5 when unset
  double q_init_lo = -2.0;
  double q_init_hi = 0.0;
  int window = 100;
  std::string out;  // output root; see DefaultOutputRoot
  bool allow_uncertified = false;
  int jobs = 1;
  std::vector<Rational> ratios;  // sweep only

  // Embedded scenario (from a manifest). Takes precedence over `scenario`.
  std::optional<std::string> scenario_text;
  // Output hashes recorded in a manifest, for --verify.
  std::map<std::string, std::string> recorded_outputs;

  double ResolvedTau() const { return tau ? *tau : static_cast<double>(steps) / 5.0; }
  // Throws ConfigError.
  void Validate() const;
};

// $FAIRNET_OUT_ROOT, or "runs".
std::string DefaultOutputRoot();

// Reads a YAML config or manifest. Unknown keys raise ConfigError.
ExperimentConfig LoadConfig(const std::filesystem::path& path);
ExperimentConfig ParseConfig(const std::string& text, const std::string& origin);

// "5_1" for 5/1, "uniform" for uniform mode.
std::string RunLabel(const ExperimentConfig& config);

std::string Sha256Hex(const std::string& data);

// Loads the scenario and rejects invalid networks with ConfigError.
Network LoadValidScenario(const std::filesystem::path& path);

struct ExperimentRun {
  ExperimentConfig config;
  Network network;
  std::string scenario_text;
  std::string run_id;
  std::vector<double> alphas;  // per group
  std::vector<std::uint64_t> seed_list;
  EquilibriumResult optimum;
  std::vector<std::vector<TrajectoryRecord>> trajectories;  // per seed
  AggregateTrajectory aggregate;
};

// Raised when the optimum cannot be certified and no override was given.
class UncertifiedOptimumError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Simulates every seed in memory. Seeds run on `config.jobs` threads; the
// result does not depend on the thread count.
ExperimentRun RunExperiment(const ExperimentConfig& config);

// Writes seed_<k>.csv, aggregate.csv and manifest.yaml under `dir`.
// Returns the sha256 of every written CSV.
std::map<std::string, std::string> WriteRun(const ExperimentRun& run,
                                            const std::filesystem::path& dir);

std::string SeedCsv(const ExperimentRun& run, std::size_t seed_index);
std::string AggregateCsv(const ExperimentRun& run);
std::string Manifest(const ExperimentRun& run, const std::map<std::string, std::string>& outputs);

// <out>/<name>/<label>.
std::filesystem::path RunDirectory(const ExperimentConfig& config);

// Runs `config.ratios` with master seed (master_seed XOR index).
std::vector<ExperimentConfig> SweepConfigs(const ExperimentConfig& config);

struct SolveReport {
  Network network;
  NashSearch nash;
  EquilibriumResult optimum;
  Rational price_of_anarchy{1};
  Rational source_disparity{0};  // at the worst equilibrium, first minus second group
  double seconds = 0.0;
};

SolveReport Solve(const Network& net, std::int64_t budget = kDefaultEnumerationBudget);
std::string FormatSolveReport(const SolveReport& report, bool flows);

}  // namespace fairnet

#endif  // FAIRNET_EXPERIMENT_H_
