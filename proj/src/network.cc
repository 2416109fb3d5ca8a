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

#include "fairnet/network.h"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace fairnet {

AffineLatency MakeVolumeDelay(const Rational& t0, const Rational& capacity) {
  if (capacity <= 0) throw std::invalid_argument("capacity must be positive");
  return AffineLatency{t0, t0 / capacity};
}

Network::Network(std::vector<NodeId> nodes, std::vector<Edge> edges,
                 NodeId destination, std::vector<GroupSpec> groups,
                 std::string name, std::string description)
    : name_(std::move(name)),
      description_(std::move(description)),
      nodes_(std::move(nodes)),
      edges_(std::move(edges)),
      destination_(std::move(destination)),
      groups_(std::move(groups)) {
  // First occurrence wins; duplicates are reported by ValidateNetwork.
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    edge_lookup_.emplace(edges_[i].id, i);
  }
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    group_lookup_.emplace(groups_[i].name, i);
  }
}

bool Network::has_node(std::string_view node) const {
  return std::find(nodes_.begin(), nodes_.end(), node) != nodes_.end();
}

std::optional<std::size_t> Network::edge_index(std::string_view id) const {
  auto it = edge_lookup_.find(std::string(id));
  if (it == edge_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Network::group_index(std::string_view name) const {
  auto it = group_lookup_.find(std::string(name));
  if (it == group_lookup_.end()) return std::nullopt;
  return it->second;
}

std::int64_t Network::total_population() const {
  std::int64_t total = 0;
  for (const GroupSpec& g : groups_) total += g.size;
  return total;
}

bool Network::operator==(const Network& other) const {
  return name_ == other.name_ && description_ == other.description_ &&
         nodes_ == other.nodes_ && edges_ == other.edges_ &&
         destination_ == other.destination_ && groups_ == other.groups_;
}

std::vector<std::string> ValidateNetwork(const Network& net) {
  std::vector<std::string> out;

  std::unordered_set<std::string> seen_nodes;
  for (const NodeId& n : net.nodes()) {
    if (n.empty()) out.push_back("node with empty name");
    if (!seen_nodes.insert(n).second) out.push_back("duplicate node '" + n + "'");
  }
  if (!net.has_node(net.destination())) {
    out.push_back("destination '" + net.destination() + "' is not a node");
  }

  std::unordered_set<std::string> seen_edges;
  for (const Edge& e : net.edges()) {
    if (e.id.empty()) out.push_back("edge with empty id");
    if (!seen_edges.insert(e.id).second) out.push_back("duplicate edge id '" + e.id + "'");
    if (!net.has_node(e.src)) {
      out.push_back("edge '" + e.id + "' references missing node '" + e.src + "'");
    }
    if (!net.has_node(e.dst)) {
      out.push_back("edge '" + e.id + "' references missing node '" + e.dst + "'");
    }
    if (e.src == e.dst && !e.allow_self_loop) {
      out.push_back("edge '" + e.id + "' is a self-loop");
    }
    if (e.latency.base < 0) out.push_back("edge '" + e.id + "' has negative base latency");
    if (e.latency.slope < 0) out.push_back("edge '" + e.id + "' has negative slope");
  }

  if (net.groups().empty()) out.push_back("network has no groups");
  std::unordered_set<std::string> seen_groups;
  for (const GroupSpec& g : net.groups()) {
    const std::string where = "group '" + g.name + "'";
    if (!seen_groups.insert(g.name).second) out.push_back("duplicate " + where);
    if (g.size < 1) out.push_back(where + " has size " + std::to_string(g.size) + " (must be >= 1)");
    if (!net.has_node(g.source)) {
      out.push_back(where + " has missing source node '" + g.source + "'");
    }
    if (g.strategies.empty()) out.push_back(where + " has no strategies");

    for (std::size_t s = 0; s < g.strategies.size(); ++s) {
      const Path& path = g.strategies[s].path;
      const std::string swhere = where + " strategy " + std::to_string(s);
      if (path.edges.empty()) {
        out.push_back(swhere + " is empty");
        continue;
      }
      std::unordered_set<std::string> used;
      const Edge* prev = nullptr;
      bool resolvable = true;
      for (const std::string& id : path.edges) {
        if (!used.insert(id).second) out.push_back(swhere + " repeats edge '" + id + "'");
        auto idx = net.edge_index(id);
        if (!idx) {
          out.push_back(swhere + " references missing edge '" + id + "'");
          resolvable = false;
          prev = nullptr;
          continue;
        }
        const Edge& e = net.edges()[*idx];
        if (prev != nullptr && prev->dst != e.src) {
          out.push_back(swhere + " is not contiguous at edge '" + id + "'");
        }
        prev = &e;
      }
      if (!resolvable) continue;
      const Edge& first = net.edges()[*net.edge_index(path.edges.front())];
      const Edge& last = net.edges()[*net.edge_index(path.edges.back())];
      if (first.src != g.source) {
        out.push_back(swhere + " does not start at source '" + g.source + "'");
      }
      if (last.dst != net.destination()) {
        out.push_back(swhere + " does not end at destination '" + net.destination() + "'");
      }
    }
  }
  return out;
}

void RequireValid(const Network& net) {
  const std::vector<std::string> violations = ValidateNetwork(net);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "invalid network '" << net.name() << "':";
  for (const std::string& v : violations) msg << "\n  " << v;
  throw std::invalid_argument(msg.str());
}

Rational LatencyEval(const AffineLatency& latency, std::int64_t load) {
  if (load < 0) throw std::invalid_argument("negative load");
  return latency.base + latency.slope * load;
}

std::vector<Path> EnumeratePaths(const Network& net, std::string_view source,
                                 int max_len) {
  if (max_len < 1) throw std::invalid_argument("max_len must be >= 1");
  if (!net.has_node(source)) {
    throw std::invalid_argument("unknown source node '" + std::string(source) + "'");
  }

  std::vector<Path> out;
  std::vector<std::string> stack;
  std::set<std::string> visited{std::string(source)};

  std::function<void(const std::string&)> dfs = [&](const std::string& at) {
    if (at == net.destination() && !stack.empty()) {
      out.push_back(Path{stack});
      return;
    }
    if (static_cast<int>(stack.size()) >= max_len) return;
    for (const Edge& e : net.edges()) {
      if (e.src != at || visited.count(e.dst) != 0) continue;
      visited.insert(e.dst);
      stack.push_back(e.id);
      dfs(e.dst);
      stack.pop_back();
      visited.erase(e.dst);
    }
  };
  dfs(std::string(source));

  std::sort(out.begin(), out.end(),
            [](const Path& a, const Path& b) { return a.edges < b.edges; });
  return out;
}

}  // namespace fairnet
