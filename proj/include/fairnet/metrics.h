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

#ifndef FAIRNET_METRICS_H_
#define FAIRNET_METRICS_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fairnet/learning.h"
#include "fairnet/rational.h"

namespace fairnet {

// Social-optimum cost a learning run is measured against.
struct OptimumReference {
  double cost = 0.0;
  bool certified = false;
};

// social_cost / so.cost. The expected cost under the joint policy is
// estimated by realized costs; averaging over seeds is left to
// AggregateRuns. Throws std::domain_error for a nonpositive optimum and
// std::invalid_argument for an uncertified one unless allowed.
double PolAt(double social_cost, const OptimumReference& so, bool allow_uncertified = false);

// Trailing moving average; the first window-1 entries average the prefix.
std::vector<double> Smooth(std::span<const double> series, int window);

struct TrajectoryRecord {
  std::int64_t step = 0;
  double social_cost = 0.0;
  double pol = 0.0;
  double sd = 0.0;
  std::vector<double> group_avg_cost;

  bool operator==(const TrajectoryRecord&) const = default;
};

// SD is AvgCost(group_a) - AvgCost(group_b).
std::vector<TrajectoryRecord> BuildTrajectory(std::span<const StepSummary> steps,
                                              const OptimumReference& so,
                                              std::size_t group_a, std::size_t group_b,
                                              bool allow_uncertified = false);

struct PointStats {
  double mean = 0.0;
  double sd = 0.0;    // sample standard deviation, 0 for one seed
  double ci95 = 0.0;  // 1.96 * sd / sqrt(seeds)
};

struct AggregateTrajectory {
  std::size_t seeds = 0;
  int window = 1;
  std::vector<PointStats> social_cost;
  std::vector<PointStats> pol;
  std::vector<PointStats> sd;
  std::vector<std::vector<double>> group_avg_mean;  // [step][group]
  std::vector<double> pol_smooth;  // Smooth(pol mean, window)
  std::vector<double> sd_smooth;
};

// Pointwise statistics over seeds. Values are sorted before summation, so the
// result does not depend on seed order. Throws std::invalid_argument for no
// runs or runs of different lengths.
AggregateTrajectory AggregateRuns(const std::vector<std::vector<TrajectoryRecord>>& runs,
                                  int window);

PointStats Summarize(std::vector<double> values);

// Rates for (first group, second group) with mean `mean_alpha` and ratio
// first/second = `ratio`. Throws std::invalid_argument unless both land in
// (0, 1].
std::pair<double, double> ResolveAlphas(double mean_alpha, const Rational& ratio);

// Mean of `series` over its last `window` entries.
double TailMean(std::span<const double> series, std::size_t window);

// P(X >= successes) for X ~ Binomial(trials, 1/2).
double SignTestPValue(int successes, int trials);

}  // namespace fairnet

#endif  // FAIRNET_METRICS_H_
