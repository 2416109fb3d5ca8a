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

#include "fairnet/learning.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fairnet {

void LearnerParams::Validate() const {
  auto fail = [](const std::string& m) { throw std::invalid_argument("learner params: " + m); };
  if (!(alpha > 0.0 && alpha <= 1.0)) fail("alpha must be in (0, 1]");
  if (!(gamma >= 0.0 && gamma <= 1.0)) fail("gamma must be in [0, 1]");
  if (!(eps_min >= 0.0 && eps_min <= eps0 && eps0 <= 1.0)) {
    fail("need 0 <= eps_min <= eps0 <= 1");
  }
  if (!(tau > 0.0)) fail("tau must be positive");
}

double EpsilonAt(const LearnerParams& params, std::int64_t t) {
  if (t < 0) throw std::invalid_argument("negative step");
  return params.eps_min +
         (params.eps0 - params.eps_min) * std::exp(-static_cast<double>(t) / params.tau);
}

std::size_t SelectAction(const std::vector<double>& q, double epsilon, Rng& rng) {
  const double coin = rng.Uniform01();
  if (coin < epsilon) return rng.UniformIndex(q.size());
  const double best = *std::max_element(q.begin(), q.end());
  std::size_t ties = 0;
  for (double v : q) ties += v == best ? 1 : 0;
  std::size_t pick = ties > 1 ? rng.UniformIndex(ties) : 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] != best) continue;
    if (pick == 0) return i;
    --pick;
  }
  return 0;  // unreachable
}

std::size_t SelectAction(QAgent& agent, std::int64_t t) {
  return SelectAction(agent.q, EpsilonAt(agent.params, t), agent.rng);
}

void QUpdate(QAgent& agent, std::size_t chosen, double reward) {
  const double best = *std::max_element(agent.q.begin(), agent.q.end());
  double& v = agent.q[chosen];
  v += agent.params.alpha * (reward + agent.params.gamma * best - v);
}

std::vector<QAgent> MakePopulation(const Network& net, const PopulationConfig& config) {
  RequireValid(net);
  if (config.group_params.size() != net.groups().size()) {
    throw std::invalid_argument("need one LearnerParams per group");
  }
  if (!(config.q_init_lo <= config.q_init_hi)) {
    throw std::invalid_argument("q_init_lo must not exceed q_init_hi");
  }
  std::vector<QAgent> agents;
  agents.reserve(static_cast<std::size_t>(net.total_population()));
  std::uint64_t stream = 0;
  for (std::size_t g = 0; g < net.groups().size(); ++g) {
    config.group_params[g].Validate();
    const GroupSpec& spec = net.groups()[g];
    for (std::int64_t i = 0; i < spec.size; ++i, ++stream) {
      QAgent a;
      a.group = g;
      a.params = config.group_params[g];
      a.stream = stream;
      a.rng = Rng(DeriveSeed(config.seed, stream));
      a.q.resize(spec.strategies.size());
      for (double& v : a.q) v = a.rng.Uniform(config.q_init_lo, config.q_init_hi);
      agents.push_back(std::move(a));
    }
  }
  return agents;
}

Simulator::Simulator(const Network& net) : kernel_(CompileFloat(net)) {
  std::vector<std::int64_t> full(kernel_.num_edges(), net.total_population());
  for (std::size_t g = 0; g < kernel_.num_groups(); ++g) {
    for (std::size_t s = 0; s < kernel_.num_strategies(g); ++s) {
      max_path_cost_ = std::max(max_path_cost_, kernel_.PathCost(g, s, full));
    }
  }
  counts_.resize(kernel_.num_groups());
  strategy_cost_.resize(kernel_.num_groups());
  for (std::size_t g = 0; g < kernel_.num_groups(); ++g) {
    counts_[g].assign(kernel_.num_strategies(g), 0);
    strategy_cost_[g].assign(kernel_.num_strategies(g), 0.0);
  }
}

void Simulator::CheckPopulation(const std::vector<QAgent>& agents) const {
  std::vector<std::int64_t> sizes(kernel_.num_groups(), 0);
  for (const QAgent& a : agents) {
    if (a.group >= sizes.size() || a.q.size() != kernel_.num_strategies(a.group)) {
      throw std::invalid_argument("agent does not match network groups");
    }
    ++sizes[a.group];
  }
  for (std::size_t g = 0; g < sizes.size(); ++g) {
    if (sizes[g] != kernel_.group_size(g)) {
      throw std::invalid_argument("population size mismatch for group " + std::to_string(g));
    }
  }
}

void Simulator::Step(std::vector<QAgent>& agents, std::int64_t t, StepOutcome& out) {
  if (t == 0) CheckPopulation(agents);
  out.chosen.resize(agents.size());
  out.rewards.resize(agents.size());

  for (auto& c : counts_) std::fill(c.begin(), c.end(), 0);
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const std::size_t a = SelectAction(agents[i], t);
    out.chosen[i] = a;
    ++counts_[agents[i].group][a];
  }
  out.profile = AggregateProfile(counts_);
  kernel_.ComputeLoads(out.profile, loads_);
  for (std::size_t g = 0; g < kernel_.num_groups(); ++g) {
    for (std::size_t s = 0; s < kernel_.num_strategies(g); ++s) {
      strategy_cost_[g][s] = kernel_.PathCost(g, s, loads_);
    }
  }

  out.group_avg_cost.assign(kernel_.num_groups(), 0.0);
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const double cost = strategy_cost_[agents[i].group][out.chosen[i]];
    out.rewards[i] = -cost;
    out.group_avg_cost[agents[i].group] += cost;
    QUpdate(agents[i], out.chosen[i], -cost);
  }
  for (std::size_t g = 0; g < kernel_.num_groups(); ++g) {
    out.group_avg_cost[g] /= static_cast<double>(kernel_.group_size(g));
  }
  out.social_cost = kernel_.SocialCost(loads_);
}

StepOutcome Simulator::Step(std::vector<QAgent>& agents, std::int64_t t) {
  StepOutcome out;
  Step(agents, t, out);
  return out;
}

void Simulator::CheckBounded(const std::vector<QAgent>& agents, double q_init_lo,
                             double q_init_hi) const {
  const double upper = std::max(0.0, q_init_hi);
  for (const QAgent& a : agents) {
    const double gamma = a.params.gamma;
    const double lower = gamma < 1.0 ? -max_path_cost_ / (1.0 - gamma) - std::abs(q_init_lo)
                                     : -std::numeric_limits<double>::infinity();
    for (double v : a.q) {
      if (!std::isfinite(v) || v > upper + 1e-9 || v < lower - 1e-9) {
        throw std::runtime_error("q value " + std::to_string(v) + " of agent " +
                                 std::to_string(a.stream) + " left its bounds");
      }
    }
  }
}

std::vector<StepSummary> RunEpisode(const Network& net, const EpisodeConfig& config) {
  if (config.steps < 0) throw std::invalid_argument("negative step count");
  std::vector<QAgent> agents = MakePopulation(net, config.population);
  Simulator sim(net);
  std::vector<StepSummary> out;
  out.reserve(static_cast<std::size_t>(config.steps));
  StepOutcome step;
  for (std::int64_t t = 0; t < config.steps; ++t) {
    sim.Step(agents, t, step);
    out.push_back(StepSummary{step.social_cost, step.group_avg_cost});
    if ((t + 1) % 1000 == 0 || t + 1 == config.steps) {
      sim.CheckBounded(agents, config.population.q_init_lo, config.population.q_init_hi);
    }
  }
  return out;
}

}  // namespace fairnet
