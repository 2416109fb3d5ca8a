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

#include "fairnet/experiment.h"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>
#include <mutex>
#include <thread>

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include "fairnet/learning.h"
#include "fairnet/scenario_io.h"

namespace fairnet {
namespace {

std::string Num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

const std::set<std::string>& ConfigKeys() {
  static const std::set<std::string> kKeys = {
      "name",      "scenario",  "steps",     "seeds",     "master_seed",
      "alpha_mode", "alpha",    "alpha_mean", "alpha_ratio", "gamma",
      "eps0",      "eps_min",   "tau",       "q_init_lo", "q_init_hi",
      "window",    "out",       "allow_uncertified", "jobs", "ratios"};
  return kKeys;
}

const std::set<std::string>& ManifestKeys() {
  static const std::set<std::string> kKeys = {
      "manifest_version", "run_id",     "resolved_alphas", "groups",
      "seed_list",        "scenario_sha256", "scenario_text", "so_cost",
      "so_certified",     "outputs"};
  return kKeys;
}

template <typename T>
T As(const YAML::Node& node, const std::string& key, const std::string& origin) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(origin + ":" + std::to_string(node.Mark().line + 1) + ": " + key +
                      ": invalid value");
  }
}

void WriteFile(const std::filesystem::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << data;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace

void ExperimentConfig::Validate() const {
  if (steps < 1) throw ConfigError("steps must be >= 1");
  if (seeds < 1) throw ConfigError("seeds must be >= 1");
  if (window < 1) throw ConfigError("window must be >= 1");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (!(q_init_lo <= q_init_hi)) throw ConfigError("q_init_lo must not exceed q_init_hi");
  if (scenario.empty() && !scenario_text) throw ConfigError("no scenario given");
  try {
    LearnerParams p{alpha, gamma, eps0, eps_min, ResolvedTau()};
    if (alpha_mode == AlphaMode::kRatio) {
      p.alpha = ResolveAlphas(alpha_mean, alpha_ratio).first;
    }
    p.Validate();
    if (alpha_mode == AlphaMode::kRatio) ResolveAlphas(alpha_mean, alpha_ratio);
    for (const Rational& r : ratios) ResolveAlphas(alpha_mean, r);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::string DefaultOutputRoot() {
  const char* env = std::getenv("FAIRNET_OUT_ROOT");
  return env != nullptr && *env != '\0' ? std::string(env) : std::string("runs");
}

ExperimentConfig ParseConfig(const std::string& text, const std::string& origin) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(origin + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) throw ConfigError(origin + ": expected a mapping");
  for (const auto& kv : root) {
    const std::string key = kv.first.as<std::string>();
    if (ConfigKeys().count(key) == 0 && ManifestKeys().count(key) == 0) {
      throw ConfigError(origin + ":" + std::to_string(kv.first.Mark().line + 1) +
                        ": unknown key '" + key + "'");
    }
  }
  ExperimentConfig c;
  auto get = [&](const char* key) { return root[key]; };
  if (auto n = get("name")) c.name = As<std::string>(n, "name", origin);
  if (auto n = get("scenario")) c.scenario = As<std::string>(n, "scenario", origin);
  if (auto n = get("steps")) c.steps = As<std::int64_t>(n, "steps", origin);
  if (auto n = get("seeds")) c.seeds = As<std::int64_t>(n, "seeds", origin);
  if (auto n = get("master_seed")) c.master_seed = As<std::uint64_t>(n, "master_seed", origin);
  if (auto n = get("alpha_mode")) {
    const std::string m = As<std::string>(n, "alpha_mode", origin);
    if (m == "uniform") {
      c.alpha_mode = AlphaMode::kUniform;
    } else if (m == "ratio") {
      c.alpha_mode = AlphaMode::kRatio;
    } else {
      throw ConfigError(origin + ": alpha_mode must be 'uniform' or 'ratio'");
    }
  }
  if (auto n = get("alpha")) c.alpha = As<double>(n, "alpha", origin);
  if (auto n = get("alpha_mean")) c.alpha_mean = As<double>(n, "alpha_mean", origin);
  try {
    if (auto n = get("alpha_ratio")) c.alpha_ratio = ParseRational(As<std::string>(n, "alpha_ratio", origin));
    if (auto n = get("ratios")) {
      for (const auto& r : n) c.ratios.push_back(ParseRational(As<std::string>(r, "ratios", origin)));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  if (auto n = get("gamma")) c.gamma = As<double>(n, "gamma", origin);
  if (auto n = get("eps0")) c.eps0 = As<double>(n, "eps0", origin);
  if (auto n = get("eps_min")) c.eps_min = As<double>(n, "eps_min", origin);
  if (auto n = get("tau"); n && !n.IsNull()) c.tau = As<double>(n, "tau", origin);
  if (auto n = get("q_init_lo")) c.q_init_lo = As<double>(n, "q_init_lo", origin);
  if (auto n = get("q_init_hi")) c.q_init_hi = As<double>(n, "q_init_hi", origin);
  if (auto n = get("window")) c.window = As<int>(n, "window", origin);
  if (auto n = get("out")) c.out = As<std::string>(n, "out", origin);
  if (auto n = get("allow_uncertified")) c.allow_uncertified = As<bool>(n, "allow_uncertified", origin);
  if (auto n = get("jobs")) c.jobs = As<int>(n, "jobs", origin);
  if (auto n = get("scenario_text")) {
    c.scenario_text = As<std::string>(n, "scenario_text", origin);
    if (auto h = get("scenario_sha256")) {
      if (As<std::string>(h, "scenario_sha256", origin) != Sha256Hex(*c.scenario_text)) {
        throw ConfigError(origin + ": embedded scenario does not match its hash");
      }
    }
  }
  if (auto n = get("outputs")) {
    for (const auto& kv : n) {
      c.recorded_outputs[kv.first.as<std::string>()] = kv.second.as<std::string>();
    }
  }
  return c;
}

ExperimentConfig LoadConfig(const std::filesystem::path& path) {
  std::string text;
  try {
    text = ReadTextFile(path);
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
  ExperimentConfig c = ParseConfig(text, path.string());
  // Scenario paths are tried as given, then relative to the config file.
  if (!c.scenario.empty() && !c.scenario_text && !std::filesystem::exists(c.scenario)) {
    const std::filesystem::path rel = path.parent_path() / c.scenario;
    if (std::filesystem::exists(rel)) c.scenario = rel.string();
  }
  return c;
}

std::string RunLabel(const ExperimentConfig& config) {
  if (config.alpha_mode == AlphaMode::kUniform) return "uniform";
  return std::to_string(config.alpha_ratio.numerator()) + "_" +
         std::to_string(config.alpha_ratio.denominator());
}

std::string Sha256Hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static const char* kHex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

Network LoadValidScenario(const std::filesystem::path& path) {
  Network net;
  try {
    net = LoadScenario(path);
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
  const auto violations = ValidateNetwork(net);
  if (!violations.empty()) {
    std::string msg = path.string() + ": invalid scenario:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw ConfigError(msg);
  }
  return net;
}

ExperimentRun RunExperiment(const ExperimentConfig& config) {
  config.Validate();
  ExperimentRun run;
  run.config = config;
  try {
    run.scenario_text = config.scenario_text ? *config.scenario_text : ReadTextFile(config.scenario);
    run.network = ParseScenario(run.scenario_text, config.scenario.empty() ? "<manifest>" : config.scenario);
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
  if (const auto v = ValidateNetwork(run.network); !v.empty()) {
    throw ConfigError("invalid scenario: " + v.front());
  }
  const Network& net = run.network;
  if (net.groups().size() != 2) throw ConfigError("learning runs need exactly two groups");
  run.run_id = config.name + "/" + RunLabel(config);

  if (config.alpha_mode == AlphaMode::kUniform) {
    run.alphas = {config.alpha, config.alpha};
  } else {
    const auto [a, b] = ResolveAlphas(config.alpha_mean, config.alpha_ratio);
    run.alphas = {a, b};
  }

  run.optimum = SocialOptimum(net);
  if (!run.optimum.certified && !config.allow_uncertified) {
    throw UncertifiedOptimumError(
        "social optimum could not be certified by enumeration; pass --allow-uncertified");
  }
  const OptimumReference so{ToDouble(run.optimum.total_cost), run.optimum.certified};

  for (std::int64_t k = 0; k < config.seeds; ++k) {
    run.seed_list.push_back(DeriveSeed(config.master_seed, static_cast<std::uint64_t>(k)));
  }

  EpisodeConfig episode;
  episode.steps = config.steps;
  episode.population.q_init_lo = config.q_init_lo;
  episode.population.q_init_hi = config.q_init_hi;
  for (double a : run.alphas) {
    episode.population.group_params.push_back(
        LearnerParams{a, config.gamma, config.eps0, config.eps_min, config.ResolvedTau()});
  }

  run.trajectories.resize(run.seed_list.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t k = next++; k < run.seed_list.size(); k = next++) {
      try {
        EpisodeConfig e = episode;
        e.population.seed = run.seed_list[k];
        const std::vector<StepSummary> steps = RunEpisode(net, e);
        run.trajectories[k] = BuildTrajectory(steps, so, 0, 1, config.allow_uncertified);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(config.jobs, static_cast<int>(run.seed_list.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  run.aggregate = AggregateRuns(run.trajectories, config.window);
  return run;
}

std::string SeedCsv(const ExperimentRun& run, std::size_t seed_index) {
  std::string out = "run_id,seed,step,group,avg_cost,social_cost,pol,sd\n";
  const auto& groups = run.network.groups();
  const std::string prefix = run.run_id + "," + std::to_string(seed_index) + ",";
  for (const TrajectoryRecord& r : run.trajectories.at(seed_index)) {
    const std::string tail = "," + Num(r.social_cost) + "," + Num(r.pol) + "," + Num(r.sd) + "\n";
    for (std::size_t g = 0; g < groups.size(); ++g) {
      out += prefix + std::to_string(r.step) + "," + groups[g].name + "," +
             Num(r.group_avg_cost[g]) + tail;
    }
  }
  return out;
}

std::string AggregateCsv(const ExperimentRun& run) {
  const AggregateTrajectory& a = run.aggregate;
  std::string out =
      "run_id,step,n_seeds,window,social_cost_mean,social_cost_sd,pol_mean,pol_sd,pol_ci95,"
      "pol_smooth,sd_mean,sd_sd,sd_ci95,sd_smooth\n";
  for (std::size_t t = 0; t < a.pol.size(); ++t) {
    out += run.run_id + "," + std::to_string(t) + "," + std::to_string(a.seeds) + "," +
           std::to_string(a.window) + "," + Num(a.social_cost[t].mean) + "," +
           Num(a.social_cost[t].sd) + "," + Num(a.pol[t].mean) + "," + Num(a.pol[t].sd) + "," +
           Num(a.pol[t].ci95) + "," + Num(a.pol_smooth[t]) + "," + Num(a.sd[t].mean) + "," +
           Num(a.sd[t].sd) + "," + Num(a.sd[t].ci95) + "," + Num(a.sd_smooth[t]) + "\n";
  }
  return out;
}

std::string Manifest(const ExperimentRun& run, const std::map<std::string, std::string>& outputs) {
  const ExperimentConfig& c = run.config;
  YAML::Emitter y;
  y.SetDoublePrecision(17);
  y << YAML::BeginMap;
  y << YAML::Key << "manifest_version" << YAML::Value << 1;
  y << YAML::Key << "run_id" << YAML::Value << run.run_id;
  y << YAML::Key << "name" << YAML::Value << c.name;
  y << YAML::Key << "scenario" << YAML::Value << c.scenario;
  y << YAML::Key << "steps" << YAML::Value << c.steps;
  y << YAML::Key << "seeds" << YAML::Value << c.seeds;
  y << YAML::Key << "master_seed" << YAML::Value << c.master_seed;
  y << YAML::Key << "alpha_mode" << YAML::Value
    << (c.alpha_mode == AlphaMode::kUniform ? "uniform" : "ratio");
  y << YAML::Key << "alpha" << YAML::Value << c.alpha;
  y << YAML::Key << "alpha_mean" << YAML::Value << c.alpha_mean;
  y << YAML::Key << "alpha_ratio" << YAML::Value << FormatRational(c.alpha_ratio);
  y << YAML::Key << "gamma" << YAML::Value << c.gamma;
  y << YAML::Key << "eps0" << YAML::Value << c.eps0;
  y << YAML::Key << "eps_min" << YAML::Value << c.eps_min;
  y << YAML::Key << "tau" << YAML::Value << c.ResolvedTau();
  y << YAML::Key << "q_init_lo" << YAML::Value << c.q_init_lo;
  y << YAML::Key << "q_init_hi" << YAML::Value << c.q_init_hi;
  y << YAML::Key << "window" << YAML::Value << c.window;
  y << YAML::Key << "allow_uncertified" << YAML::Value << c.allow_uncertified;
  y << YAML::Key << "jobs" << YAML::Value << c.jobs;
  y << YAML::Key << "groups" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const GroupSpec& g : run.network.groups()) y << g.name;
  y << YAML::EndSeq;
  y << YAML::Key << "resolved_alphas" << YAML::Value << YAML::Flow << YAML::BeginMap;
  for (std::size_t g = 0; g < run.alphas.size(); ++g) {
    y << YAML::Key << run.network.groups()[g].name << YAML::Value << run.alphas[g];
  }
  y << YAML::EndMap;
  y << YAML::Key << "seed_list" << YAML::Value << YAML::Flow << run.seed_list;
  y << YAML::Key << "so_cost" << YAML::Value << FormatRational(run.optimum.total_cost);
  y << YAML::Key << "so_certified" << YAML::Value << run.optimum.certified;
  y << YAML::Key << "scenario_sha256" << YAML::Value << Sha256Hex(run.scenario_text);
  y << YAML::Key << "scenario_text" << YAML::Value << YAML::Literal << run.scenario_text;
  y << YAML::Key << "outputs" << YAML::Value << YAML::BeginMap;
  for (const auto& [file, hash] : outputs) y << YAML::Key << file << YAML::Value << hash;
  y << YAML::EndMap;
  y << YAML::EndMap;
  return std::string(y.c_str()) + "\n";
}

std::filesystem::path RunDirectory(const ExperimentConfig& config) {
  const std::string root = config.out.empty() ? DefaultOutputRoot() : config.out;
  return std::filesystem::path(root) / config.name / RunLabel(config);
}

std::map<std::string, std::string> WriteRun(const ExperimentRun& run,
                                            const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::map<std::string, std::string> outputs;
  for (std::size_t k = 0; k < run.trajectories.size(); ++k) {
    const std::string file = "seed_" + std::to_string(k) + ".csv";
    const std::string csv = SeedCsv(run, k);
    WriteFile(dir / file, csv);
    outputs[file] = Sha256Hex(csv);
  }
  const std::string agg = AggregateCsv(run);
  WriteFile(dir / "aggregate.csv", agg);
  outputs["aggregate.csv"] = Sha256Hex(agg);
  WriteFile(dir / "manifest.yaml", Manifest(run, outputs));
  return outputs;
}

std::vector<ExperimentConfig> SweepConfigs(const ExperimentConfig& config) {
  if (config.ratios.empty()) throw ConfigError("sweep needs at least one ratio");
  std::vector<ExperimentConfig> out;
  for (std::size_t i = 0; i < config.ratios.size(); ++i) {
    ExperimentConfig c = config;
    c.alpha_mode = AlphaMode::kRatio;
    c.alpha_ratio = config.ratios[i];
    c.master_seed = config.master_seed ^ static_cast<std::uint64_t>(i);
    c.ratios.clear();
    c.recorded_outputs.clear();
    out.push_back(std::move(c));
  }
  return out;
}

SolveReport Solve(const Network& net, std::int64_t budget) {
  const auto start = std::chrono::steady_clock::now();
  SolveReport r;
  r.network = net;
  r.nash = MultiStartNash(net);
  r.optimum = SocialOptimum(net, budget);
  r.price_of_anarchy = PriceOfAnarchy(r.nash.worst, r.optimum);
  if (net.groups().size() >= 2) {
    r.source_disparity = r.nash.worst.per_group_avg[0] - r.nash.worst.per_group_avg[1];
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

namespace {

void EmitResult(YAML::Emitter& y, const Network& net, const EquilibriumResult& r) {
  y << YAML::BeginMap;
  y << YAML::Key << "total_cost" << YAML::Value << FormatRational(r.total_cost);
  y << YAML::Key << "total_cost_decimal" << YAML::Value << FormatDecimal(r.total_cost, 4);
  y << YAML::Key << "profile" << YAML::Value << r.profile.ToString();
  y << YAML::Key << "per_group_avg" << YAML::Value << YAML::Flow << YAML::BeginMap;
  for (std::size_t g = 0; g < r.per_group_avg.size(); ++g) {
    y << YAML::Key << net.groups()[g].name << YAML::Value << FormatDecimal(r.per_group_avg[g], 4);
  }
  y << YAML::EndMap;
  y << YAML::Key << "iterations" << YAML::Value << r.iterations;
  y << YAML::Key << "certified" << YAML::Value << r.certified;
  y << YAML::EndMap;
}

}  // namespace

std::string FormatSolveReport(const SolveReport& report, bool flows) {
  const Network& net = report.network;
  YAML::Emitter y;
  y << YAML::BeginMap;
  y << YAML::Key << "scenario" << YAML::Value << net.name();
  y << YAML::Key << "nash_uniform_start" << YAML::Value;
  EmitResult(y, net, report.nash.from_uniform);
  y << YAML::Key << "nash_worst" << YAML::Value;
  EmitResult(y, net, report.nash.worst);
  y << YAML::Key << "nash_starts" << YAML::Value << report.nash.all.size();
  y << YAML::Key << "social_optimum" << YAML::Value;
  EmitResult(y, net, report.optimum);
  y << YAML::Key << "price_of_anarchy" << YAML::Value << FormatRational(report.price_of_anarchy);
  y << YAML::Key << "price_of_anarchy_decimal" << YAML::Value
    << FormatDecimal(report.price_of_anarchy, 4);
  if (net.groups().size() >= 2) {
    y << YAML::Key << "source_disparity" << YAML::Value << FormatRational(report.source_disparity);
    y << YAML::Key << "source_disparity_decimal" << YAML::Value
      << FormatDecimal(report.source_disparity, 4);
  }
  if (flows) {
    const std::vector<std::int64_t> loads = EdgeLoads(net, report.nash.worst.profile);
    y << YAML::Key << "nash_flows" << YAML::Value << YAML::BeginMap;
    for (std::size_t e = 0; e < loads.size(); ++e) {
      y << YAML::Key << net.edges()[e].id << YAML::Value << loads[e];
    }
    y << YAML::EndMap;
  }
  y << YAML::Key << "seconds" << YAML::Value << report.seconds;
  y << YAML::EndMap;
  return std::string(y.c_str()) + "\n";
}

}  // namespace fairnet
