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

#ifndef FAIRNET_GAME_H_
#define FAIRNET_GAME_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fairnet/network.h"
#include "fairnet/rational.h"

namespace fairnet {

// Number of agents of each group on each of the group's strategies. Agents of
// a group are interchangeable, so this is the full state for every cost.
class AggregateProfile {
 public:
  AggregateProfile() = default;
  explicit AggregateProfile(std::vector<std::vector<std::int64_t>> counts)
      : counts_(std::move(counts)) {}

  // Counts keyed by group name, in strategy order.
  static AggregateProfile FromNamed(
      const Network& net,
      const std::map<std::string, std::vector<std::int64_t>>& counts);

  std::size_t num_groups() const { return counts_.size(); }
  const std::vector<std::int64_t>& group(std::size_t g) const { return counts_[g]; }
  std::int64_t count(std::size_t g, std::size_t s) const { return counts_[g][s]; }
  const std::vector<std::vector<std::int64_t>>& counts() const { return counts_; }

  // Moves one agent of group g from strategy `from` to `to`.
  void Move(std::size_t g, std::size_t from, std::size_t to);

  std::string ToString() const;  // "[50,50][34,33,33]"

  bool operator==(const AggregateProfile&) const = default;
  auto operator<=>(const AggregateProfile&) const = default;

 private:
  std::vector<std::vector<std::int64_t>> counts_;
};

// Throws std::invalid_argument unless `prof` has one count per strategy of
// every group, all nonnegative, summing to the group sizes.
void CheckProfile(const Network& net, const AggregateProfile& prof);

// Index-level view of a valid network used by the inner loops. With T =
// int64_t all latencies are multiplied by `scale()` (the lcm of every
// coefficient denominator) so that costs are exact integers; with T = double
// scale() is 1 and values are approximations.
template <typename T>
class GameKernel {
 public:
  std::size_t num_edges() const { return base_.size(); }
  std::size_t num_groups() const { return paths_.size(); }
  std::size_t num_strategies(std::size_t g) const { return paths_[g].size(); }
  std::int64_t group_size(std::size_t g) const { return sizes_[g]; }
  std::int64_t scale() const { return scale_; }
  const std::vector<std::size_t>& path(std::size_t g, std::size_t s) const {
    return paths_[g][s];
  }
  bool on_path(std::size_t g, std::size_t s, std::size_t e) const {
    return membership_[g][s][e] != 0;
  }
  T base(std::size_t e) const { return base_[e]; }
  T slope(std::size_t e) const { return slope_[e]; }

  // Overrides one edge's coefficients (already scaled).
  void set_latency(std::size_t e, T base, T slope) {
    base_[e] = base;
    slope_[e] = slope;
  }

  T Latency(std::size_t e, std::int64_t load) const {
    return base_[e] + slope_[e] * static_cast<T>(load);
  }

  void ComputeLoads(const AggregateProfile& prof, std::vector<std::int64_t>& loads) const {
    loads.assign(num_edges(), 0);
    for (std::size_t g = 0; g < paths_.size(); ++g) {
      for (std::size_t s = 0; s < paths_[g].size(); ++s) {
        const std::int64_t c = prof.count(g, s);
        if (c == 0) continue;
        for (std::size_t e : paths_[g][s]) loads[e] += c;
      }
    }
  }

  T PathCost(std::size_t g, std::size_t s, const std::vector<std::int64_t>& loads) const {
    T cost{};
    for (std::size_t e : paths_[g][s]) cost += Latency(e, loads[e]);
    return cost;
  }

  // Cost of strategy `to` for an agent that has just left `from`.
  T MoveCost(std::size_t g, std::size_t from, std::size_t to,
             const std::vector<std::int64_t>& loads) const {
    T cost{};
    for (std::size_t e : paths_[g][to]) {
      cost += Latency(e, loads[e] + (on_path(g, from, e) ? 0 : 1));
    }
    return cost;
  }

  T SocialCost(const std::vector<std::int64_t>& loads) const {
    T cost{};
    for (std::size_t e = 0; e < loads.size(); ++e) {
      cost += static_cast<T>(loads[e]) * Latency(e, loads[e]);
    }
    return cost;
  }

  // Sum over edges of f(1) + ... + f(x).
  T Potential(const std::vector<std::int64_t>& loads) const {
    T phi{};
    for (std::size_t e = 0; e < loads.size(); ++e) {
      const std::int64_t x = loads[e];
      phi += base_[e] * static_cast<T>(x) + slope_[e] * static_cast<T>(x * (x + 1) / 2);
    }
    return phi;
  }

  GameKernel() = default;
  GameKernel(std::int64_t scale, std::vector<T> base, std::vector<T> slope,
             std::vector<std::int64_t> sizes,
             std::vector<std::vector<std::vector<std::size_t>>> paths)
      : scale_(scale),
        base_(std::move(base)),
        slope_(std::move(slope)),
        sizes_(std::move(sizes)),
        paths_(std::move(paths)) {
    membership_.resize(paths_.size());
    for (std::size_t g = 0; g < paths_.size(); ++g) {
      for (const auto& p : paths_[g]) {
        std::vector<char> mask(base_.size(), 0);
        for (std::size_t e : p) mask[e] = 1;
        membership_[g].push_back(std::move(mask));
      }
    }
  }

 private:
  std::int64_t scale_ = 1;
  std::vector<T> base_;
  std::vector<T> slope_;
  std::vector<std::int64_t> sizes_;
  std::vector<std::vector<std::vector<std::size_t>>> paths_;
  std::vector<std::vector<std::vector<char>>> membership_;
};

using ExactKernel = GameKernel<std::int64_t>;
using FloatKernel = GameKernel<double>;

// Both throw std::invalid_argument for invalid networks; CompileExact also
// throws std::overflow_error when scaled costs could exceed 2^62.
ExactKernel CompileExact(const Network& net);
FloatKernel CompileFloat(const Network& net);

std::vector<std::int64_t> EdgeLoads(const Network& net, const AggregateProfile& prof);
Rational StrategyCost(const Network& net, const AggregateProfile& prof,
                      std::size_t group, std::size_t strategy);
Rational SocialCost(const Network& net, const AggregateProfile& prof);
Rational GroupAverageCost(const Network& net, const AggregateProfile& prof, std::size_t group);
// AvgCost(a) - AvgCost(b); positive favors b.
Rational SourceDisparity(const Network& net, const AggregateProfile& prof,
                         std::string_view group_a, std::string_view group_b);
Rational RosenthalPotential(const Network& net, const AggregateProfile& prof);

struct CostReport {
  std::map<std::string, std::int64_t> edge_loads;
  // [group][strategy]
  std::vector<std::vector<Rational>> per_strategy_cost;
  std::vector<Rational> per_group_avg;
  Rational social_cost;
  Rational potential;
};

CostReport Analyze(const Network& net, const AggregateProfile& prof);

// YAML text with exact fractions and 6-digit decimals side by side.
std::string FormatCostReport(const Network& net, const AggregateProfile& prof,
                             const CostReport& report);

// Parses "S1=50,50;S2=34,33,33" against `net` (group names, strategy order).
// Whitespace may replace the semicolon.
AggregateProfile ParseProfile(const Network& net, std::string_view text);

}  // namespace fairnet

#endif  // FAIRNET_GAME_H_
