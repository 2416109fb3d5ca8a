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

#ifndef FAIRNET_SOLVERS_H_
#define FAIRNET_SOLVERS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "fairnet/game.h"
#include "fairnet/network.h"
#include "fairnet/rational.h"

namespace fairnet {

inline constexpr std::int64_t kDefaultEnumerationBudget = 50'000'000;
inline constexpr int kLocalSearchRestarts = 32;
inline constexpr int kNashRandomStarts = 16;
inline constexpr std::int64_t kDefaultNashIterationBudget = 100'000'000;

enum class SolutionKind { kNash, kSocialOptimum };

struct EquilibriumResult {
  AggregateProfile profile;
  Rational total_cost{0};
  std::vector<Rational> per_group_avg;
  SolutionKind kind = SolutionKind::kNash;
  std::int64_t iterations = 0;
  // NE: passed VerifyNash. SO: exhaustive enumeration, not local search.
  bool certified = false;
};

struct BestResponseResult {
  AggregateProfile profile;
  bool improved = false;
};

// Applies the single-agent move with the largest strict cost improvement for
// the mover. Ties go to the lowest group name, then the lowest source
// strategy index, then the lowest target index.
BestResponseResult BestResponseStep(const Network& net, const AggregateProfile& prof);

// Largest-remainder even split; leftover agents go to the lowest indices.
AggregateProfile UniformProfile(const Network& net);
// Each agent picks a strategy uniformly at random.
AggregateProfile RandomProfile(const Network& net, std::uint64_t seed);
// Every combination of "whole group on one strategy".
std::vector<AggregateProfile> CornerProfiles(const Network& net);

struct NashOptions {
  std::int64_t max_iterations = kDefaultNashIterationBudget;
  // Called with each visited profile (start included) and its potential.
  std::function<void(const AggregateProfile&, const Rational&)> on_step;
};

// Best-response dynamics until no improving move exists. Throws
// std::runtime_error if the iteration budget is exhausted.
EquilibriumResult NashSolve(const Network& net, const AggregateProfile& start,
                            const NashOptions& options = {});
EquilibriumResult NashSolve(const Network& net);  // from UniformProfile

bool VerifyNash(const Network& net, const AggregateProfile& prof);

// Number of aggregate profiles, saturating at INT64_MAX.
std::int64_t CountProfiles(const Network& net);

// Exhaustive minimum when CountProfiles <= budget (certified, lexicographic
// tie-break), otherwise multi-start steepest descent on the social cost.
EquilibriumResult SocialOptimum(const Network& net,
                                std::int64_t budget = kDefaultEnumerationBudget);

// ne.total_cost / so.total_cost. Throws std::domain_error for SO cost <= 0.
Rational PriceOfAnarchy(const EquilibriumResult& ne, const EquilibriumResult& so);

struct NashSearch {
  EquilibriumResult from_uniform;
  EquilibriumResult worst;  // highest total cost among all fixed points found
  std::vector<EquilibriumResult> all;
};

// nash_solve from the uniform profile, every corner profile (when there are at
// most 64) and `random_starts` random profiles derived from `seed`.
NashSearch MultiStartNash(const Network& net, int random_starts = kNashRandomStarts,
                          std::uint64_t seed = 0);

// Group indices sorted by group name.
std::vector<std::size_t> GroupNameOrder(const Network& net);

namespace detail {

struct Move {
  std::size_t group = 0;
  std::size_t from = 0;
  std::size_t to = 0;
  std::int64_t improvement = 0;  // scaled units, > 0
};

std::optional<Move> FindBestMove(const ExactKernel& kernel, const AggregateProfile& prof,
                                 const std::vector<std::int64_t>& loads,
                                 const std::vector<std::size_t>& group_order);

void ApplyMove(const ExactKernel& kernel, const Move& move, AggregateProfile& prof,
               std::vector<std::int64_t>& loads);

// Runs best-response dynamics in place; returns the number of moves.
std::int64_t DescendToNash(
    const ExactKernel& kernel, const std::vector<std::size_t>& group_order,
    AggregateProfile& prof, std::int64_t max_iterations,
    const std::function<void(const AggregateProfile&, std::int64_t)>& on_step = {});

bool IsNash(const ExactKernel& kernel, const AggregateProfile& prof);

struct OptimumScan {
  AggregateProfile profile;
  std::int64_t cost = 0;  // scaled
  std::int64_t evaluated = 0;
};

// Exhaustive scan over aggregate profiles (no budget check).
OptimumScan EnumerateOptimum(const ExactKernel& kernel);

AggregateProfile UniformProfile(const ExactKernel& kernel);

// Single-agent moves that lower the social cost, largest decrease first,
// until none is left.
AggregateProfile SteepestSocialDescent(const ExactKernel& kernel, AggregateProfile prof);

// Scaled social cost of a profile.
std::int64_t SocialCostScaled(const ExactKernel& kernel, const AggregateProfile& prof);

}  // namespace detail
}  // namespace fairnet

#endif  // FAIRNET_SOLVERS_H_
