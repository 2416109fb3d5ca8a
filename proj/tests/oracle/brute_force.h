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

// Brute-force reference for small congestion games. Shares no code with the
// solvers: it scales latencies on its own and recomputes every load from
// scratch for every profile.

#ifndef FAIRNET_TESTS_ORACLE_BRUTE_FORCE_H_
#define FAIRNET_TESTS_ORACLE_BRUTE_FORCE_H_

#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include "fairnet/game.h"
#include "fairnet/network.h"
#include "fairnet/rational.h"

namespace fairnet::oracle {

struct BruteForceResult {
  std::int64_t profiles = 0;
  std::int64_t scale = 1;            // integer scale applied to all latencies
  std::int64_t min_cost = 0;         // scaled
  std::set<std::int64_t> ne_costs;   // scaled
  std::int64_t ne_count = 0;
  std::vector<std::vector<std::int64_t>> argmin;  // first minimizer found

  Rational MinCost() const { return Rational(min_cost, scale); }
  Rational MaxNeCost() const { return Rational(*ne_costs.rbegin(), scale); }
  Rational MinNeCost() const { return Rational(*ne_costs.begin(), scale); }
  bool IsNeCost(const Rational& cost) const;
};

// Visits every aggregate profile of `net`.
void ForEachProfile(const Network& net,
                    const std::function<void(const std::vector<std::vector<std::int64_t>>&)>& f);

BruteForceResult Enumerate(const Network& net);

// Exact social cost of a profile, computed edge by edge.
Rational Cost(const Network& net, const std::vector<std::vector<std::int64_t>>& counts);

// True when no single agent can strictly lower its own cost.
bool IsNash(const Network& net, const std::vector<std::vector<std::int64_t>>& counts);

}  // namespace fairnet::oracle

#endif  // FAIRNET_TESTS_ORACLE_BRUTE_FORCE_H_
