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

#include "oracle/random_nets.h"

#include <algorithm>
#include <string>
#include <vector>

#include "fairnet/random.h"

namespace fairnet::oracle {

Network RandomNet(std::uint64_t seed, const RandomNetOptions& options) {
  Rng rng(DeriveSeed(seed, 0xA11CE));
  const int groups = 1 + static_cast<int>(rng.UniformIndex(options.max_groups));
  constexpr int kHubs = 3;
  const std::int64_t dens[] = {1, 2, 3, 4, 5, 10};
  auto coeff = [&](int max_num) {
    const std::int64_t den = dens[rng.UniformIndex(6)];
    return Rational(static_cast<std::int64_t>(rng.UniformIndex(max_num + 1)), den);
  };

  std::vector<NodeId> nodes;
  for (int g = 0; g < groups; ++g) nodes.push_back("S" + std::to_string(g));
  for (int i = 0; i < kHubs; ++i) nodes.push_back("M" + std::to_string(i));
  nodes.push_back("D");

  std::vector<Edge> edges;
  auto add = [&](const std::string& a, const std::string& b) {
    edges.push_back({a + b, a, b, {coeff(4), coeff(3)}});
  };
  for (int g = 0; g < groups; ++g) {
    for (int i = 0; i < kHubs; ++i) add("S" + std::to_string(g), "M" + std::to_string(i));
  }
  for (int i = 0; i < kHubs; ++i) add("M" + std::to_string(i), "D");
  for (int i = 0; i < kHubs; ++i) {
    for (int j = i + 1; j < kHubs; ++j) add("M" + std::to_string(i), "M" + std::to_string(j));
  }

  std::vector<GroupSpec> specs;
  for (int g = 0; g < groups; ++g) {
    const std::string s = "S" + std::to_string(g);
    std::vector<Path> candidates;
    for (int i = 0; i < kHubs; ++i) {
      const std::string m = "M" + std::to_string(i);
      candidates.push_back(Path{{s + m, m + "D"}});
      for (int j = i + 1; j < kHubs; ++j) {
        const std::string n = "M" + std::to_string(j);
        candidates.push_back(Path{{s + m, m + n, n + "D"}});
      }
    }
    // Partial Fisher-Yates for k distinct candidates.
    const int k = 1 + static_cast<int>(rng.UniformIndex(options.max_strategies));
    GroupSpec spec{s, s, 1 + static_cast<std::int64_t>(rng.UniformIndex(options.max_size)), {}};
    for (int t = 0; t < k; ++t) {
      const std::size_t pick = t + rng.UniformIndex(candidates.size() - t);
      std::swap(candidates[t], candidates[pick]);
      spec.strategies.push_back({"p" + std::to_string(t), candidates[t]});
    }
    specs.push_back(std::move(spec));
  }
  return Network(nodes, edges, "D", specs, "random_" + std::to_string(seed));
}

AggregateProfile RandomCounts(const Network& net, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<std::int64_t>> counts;
  for (const GroupSpec& g : net.groups()) {
    auto& c = counts.emplace_back(g.strategies.size(), 0);
    for (std::int64_t a = 0; a < g.size; ++a) ++c[rng.UniformIndex(c.size())];
  }
  return AggregateProfile(std::move(counts));
}

}  // namespace fairnet::oracle
