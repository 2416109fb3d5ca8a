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

#ifndef FAIRNET_LEARNING_H_
#define FAIRNET_LEARNING_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fairnet/game.h"
#include "fairnet/network.h"
#include "fairnet/random.h"

namespace fairnet {

struct LearnerParams {
  double alpha = 0.2;
  double gamma = 0.0;
  double eps0 = 1.0;
  double eps_min = 0.01;
  double tau = 2000.0;

  // Throws std::invalid_argument when a field is out of range.
  void Validate() const;
  bool operator==(const LearnerParams&) const = default;
};

// eps_min + (eps0 - eps_min) * exp(-t / tau).
double EpsilonAt(const LearnerParams& params, std::int64_t t);

// Stateless Q-learner: one action value per strategy of its group.
struct QAgent {
  std::size_t group = 0;
  std::vector<double> q;
  LearnerParams params;
  std::uint64_t stream = 0;
  Rng rng;
};

// Epsilon-greedy. Draws the exploration coin first; greedy ties are broken
// uniformly among the maximizers.
std::size_t SelectAction(const std::vector<double>& q, double epsilon, Rng& rng);
std::size_t SelectAction(QAgent& agent, std::int64_t t);

// q[c] += alpha * (reward + gamma * max(q) - q[c]), max taken before the write.
void QUpdate(QAgent& agent, std::size_t chosen, double reward);

struct PopulationConfig {
  std::vector<LearnerParams> group_params;  // one per network group
  double q_init_lo = -2.0;
  double q_init_hi = 0.0;
  std::uint64_t seed = 0;
};

// Agents in group order. Agent i draws from stream DeriveSeed(seed, i) and
// starts with q values uniform on [q_init_lo, q_init_hi].
std::vector<QAgent> MakePopulation(const Network& net, const PopulationConfig& config);

struct StepOutcome {
  std::vector<std::size_t> chosen;
  AggregateProfile profile;
  std::vector<double> rewards;
  double social_cost = 0.0;
  std::vector<double> group_avg_cost;
};

// Synchronous repeated play: every agent chooses, loads are tallied, then
// every agent is rewarded with the negated latency of its path and updates.
class Simulator {
 public:
  explicit Simulator(const Network& net);

  // Throws std::invalid_argument if the agents do not match the groups.
  void Step(std::vector<QAgent>& agents, std::int64_t t, StepOutcome& out);
  StepOutcome Step(std::vector<QAgent>& agents, std::int64_t t);

  // Throws std::runtime_error if any q value left the interval implied by
  // nonpositive rewards and the initial range.
  void CheckBounded(const std::vector<QAgent>& agents, double q_init_lo,
                    double q_init_hi) const;

  const FloatKernel& kernel() const { return kernel_; }

 private:
  void CheckPopulation(const std::vector<QAgent>& agents) const;

  FloatKernel kernel_;
  double max_path_cost_ = 0.0;
  std::vector<std::int64_t> loads_;
  std::vector<std::vector<std::int64_t>> counts_;
  std::vector<std::vector<double>> strategy_cost_;
};

struct StepSummary {
  double social_cost = 0.0;
  std::vector<double> group_avg_cost;

  bool operator==(const StepSummary&) const = default;
};

struct EpisodeConfig {
  std::int64_t steps = 10000;
  PopulationConfig population;
};

// T steps from a fresh population; a pure function of (net, config).
std::vector<StepSummary> RunEpisode(const Network& net, const EpisodeConfig& config);

}  // namespace fairnet

#endif  // FAIRNET_LEARNING_H_
