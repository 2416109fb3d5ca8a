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

#ifndef FAIRNET_NETWORK_H_
#define FAIRNET_NETWORK_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fairnet/rational.h"

namespace fairnet {

using NodeId = std::string;

// f(x) = base + slope * x. Both coefficients must be nonnegative, which makes
// the latency nonnegative and nondecreasing in the load.
struct AffineLatency {
  Rational base{0};
  Rational slope{0};

  bool operator==(const AffineLatency&) const = default;
};

// Volume-delay parameters an edge was built from: f(x) = t0 * (1 + x / K).
// Kept only so scenario files can be written back in the same form.
struct VolumeDelay {
  Rational t0{0};
  Rational capacity{1};
  // Capacity was given as "N", the total population.
  bool capacity_is_population = false;

  bool operator==(const VolumeDelay&) const = default;
};

AffineLatency MakeVolumeDelay(const Rational& t0, const Rational& capacity);

struct Edge {
  std::string id;
  NodeId src;
  NodeId dst;
  AffineLatency latency;
  bool allow_self_loop = false;
  std::optional<VolumeDelay> volume_delay;

  bool operator==(const Edge&) const = default;
};

// Ordered edge ids from a source to the destination.
struct Path {
  std::vector<std::string> edges;

  bool operator==(const Path&) const = default;
  auto operator<=>(const Path&) const = default;
};

struct Strategy {
  std::string name;  // optional label, e.g. "Up"
  Path path;

  bool operator==(const Strategy&) const = default;
};

struct GroupSpec {
  std::string name;
  NodeId source;
  std::int64_t size = 0;
  std::vector<Strategy> strategies;

  bool operator==(const GroupSpec&) const = default;
};

// A routing network with one common destination and a set of source groups.
// Immutable once built. Construction does not validate; use ValidateNetwork.
class Network {
 public:
  Network() = default;
  Network(std::vector<NodeId> nodes, std::vector<Edge> edges,
          NodeId destination, std::vector<GroupSpec> groups,
          std::string name = "", std::string description = "");

  const std::string& name() const { return name_; }
  const std::string& description() const { return description_; }
  const std::vector<NodeId>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const NodeId& destination() const { return destination_; }
  const std::vector<GroupSpec>& groups() const { return groups_; }

  bool has_node(std::string_view node) const;
  std::optional<std::size_t> edge_index(std::string_view id) const;
  std::optional<std::size_t> group_index(std::string_view name) const;
  std::int64_t total_population() const;

  bool operator==(const Network& other) const;

 private:
  std::string name_;
  std::string description_;
  std::vector<NodeId> nodes_;
  std::vector<Edge> edges_;
  NodeId destination_;
  std::vector<GroupSpec> groups_;
  std::unordered_map<std::string, std::size_t> edge_lookup_;
  std::unordered_map<std::string, std::size_t> group_lookup_;
};

// Every invariant violation in `net`, as human-readable messages. Empty iff
// the network is well formed.
std::vector<std::string> ValidateNetwork(const Network& net);

// Throws std::invalid_argument listing the violations if `net` is invalid.
void RequireValid(const Network& net);

// base + slope * load, exactly. Throws std::invalid_argument for load < 0.
Rational LatencyEval(const AffineLatency& latency, std::int64_t load);

// All simple paths from `source` to the destination with at most `max_len`
// edges, sorted lexicographically by edge-id sequence.
std::vector<Path> EnumeratePaths(const Network& net, std::string_view source,
                                 int max_len);

}  // namespace fairnet

#endif  // FAIRNET_NETWORK_H_
