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

#include "fairnet/game.h"

#include <numeric>
#include <sstream>
#include <stdexcept>

#include "fairnet/rational.h"

namespace fairnet {
namespace {

std::vector<std::vector<std::vector<std::size_t>>> ResolvePaths(const Network& net) {
  std::vector<std::vector<std::vector<std::size_t>>> paths;
  for (const GroupSpec& g : net.groups()) {
    auto& gp = paths.emplace_back();
    for (const Strategy& s : g.strategies) {
      auto& p = gp.emplace_back();
      for (const std::string& id : s.path.edges) p.push_back(*net.edge_index(id));
    }
  }
  return paths;
}

std::vector<std::int64_t> GroupSizes(const Network& net) {
  std::vector<std::int64_t> sizes;
  for (const GroupSpec& g : net.groups()) sizes.push_back(g.size);
  return sizes;
}

std::size_t GroupByName(const Network& net, std::string_view name) {
  auto idx = net.group_index(name);
  if (!idx) throw std::invalid_argument("unknown group '" + std::string(name) + "'");
  return *idx;
}

}  // namespace

AggregateProfile AggregateProfile::FromNamed(
    const Network& net, const std::map<std::string, std::vector<std::int64_t>>& counts) {
  std::vector<std::vector<std::int64_t>> out(net.groups().size());
  for (const auto& [name, c] : counts) out[GroupByName(net, name)] = c;
  AggregateProfile prof(std::move(out));
  CheckProfile(net, prof);
  return prof;
}

void AggregateProfile::Move(std::size_t g, std::size_t from, std::size_t to) {
  if (counts_[g][from] <= 0) throw std::invalid_argument("no agent to move");
  --counts_[g][from];
  ++counts_[g][to];
}

std::string AggregateProfile::ToString() const {
  std::string out;
  for (const auto& g : counts_) {
    out += "[";
    for (std::size_t s = 0; s < g.size(); ++s) {
      if (s > 0) out += ",";
      out += std::to_string(g[s]);
    }
    out += "]";
  }
  return out;
}

void CheckProfile(const Network& net, const AggregateProfile& prof) {
  if (prof.num_groups() != net.groups().size()) {
    throw std::invalid_argument("profile has " + std::to_string(prof.num_groups()) +
                                " groups, network has " +
                                std::to_string(net.groups().size()));
  }
  for (std::size_t g = 0; g < prof.num_groups(); ++g) {
    const GroupSpec& spec = net.groups()[g];
    const auto& c = prof.group(g);
    if (c.size() != spec.strategies.size()) {
      throw std::invalid_argument("group '" + spec.name + "' expects " +
                                  std::to_string(spec.strategies.size()) + " counts");
    }
    std::int64_t total = 0;
    for (std::int64_t v : c) {
      if (v < 0) throw std::invalid_argument("negative count in group '" + spec.name + "'");
      total += v;
    }
    if (total != spec.size) {
      throw std::invalid_argument("group '" + spec.name + "' counts sum to " +
                                  std::to_string(total) + ", expected " +
                                  std::to_string(spec.size));
    }
  }
}

ExactKernel CompileExact(const Network& net) {
  RequireValid(net);
  std::int64_t scale = 1;
  for (const Edge& e : net.edges()) {
    scale = std::lcm(scale, e.latency.base.denominator());
    scale = std::lcm(scale, e.latency.slope.denominator());
    if (scale > (std::int64_t{1} << 40)) {
      throw std::overflow_error("latency denominators too large for exact mode");
    }
  }
  const long double n = static_cast<long double>(net.total_population());
  long double bound = 0;
  std::vector<std::int64_t> base;
  std::vector<std::int64_t> slope;
  for (const Edge& e : net.edges()) {
    const Rational b = e.latency.base * scale;
    const Rational s = e.latency.slope * scale;
    base.push_back(b.numerator());
    slope.push_back(s.numerator());
    bound += (static_cast<long double>(b.numerator()) +
              static_cast<long double>(s.numerator()) * (n + 1)) * (n + 1);
  }
  if (bound > static_cast<long double>(std::int64_t{1} << 62)) {
    throw std::overflow_error("scaled costs exceed exact integer range");
  }
  return ExactKernel(scale, std::move(base), std::move(slope), GroupSizes(net),
                     ResolvePaths(net));
}

FloatKernel CompileFloat(const Network& net) {
  RequireValid(net);
  std::vector<double> base;
  std::vector<double> slope;
  for (const Edge& e : net.edges()) {
    base.push_back(ToDouble(e.latency.base));
    slope.push_back(ToDouble(e.latency.slope));
  }
  return FloatKernel(1, std::move(base), std::move(slope), GroupSizes(net),
                     ResolvePaths(net));
}

std::vector<std::int64_t> EdgeLoads(const Network& net, const AggregateProfile& prof) {
  RequireValid(net);
  CheckProfile(net, prof);
  std::vector<std::int64_t> loads(net.edges().size(), 0);
  for (std::size_t g = 0; g < net.groups().size(); ++g) {
    const GroupSpec& spec = net.groups()[g];
    for (std::size_t s = 0; s < spec.strategies.size(); ++s) {
      for (const std::string& id : spec.strategies[s].path.edges) {
        loads[*net.edge_index(id)] += prof.count(g, s);
      }
    }
  }
  return loads;
}

Rational StrategyCost(const Network& net, const AggregateProfile& prof,
                      std::size_t group, std::size_t strategy) {
  if (group >= net.groups().size() ||
      strategy >= net.groups()[group].strategies.size()) {
    throw std::invalid_argument("strategy index out of range");
  }
  const std::vector<std::int64_t> loads = EdgeLoads(net, prof);
  Rational cost(0);
  for (const std::string& id : net.groups()[group].strategies[strategy].path.edges) {
    const std::size_t e = *net.edge_index(id);
    cost += LatencyEval(net.edges()[e].latency, loads[e]);
  }
  return cost;
}

Rational SocialCost(const Network& net, const AggregateProfile& prof) {
  const std::vector<std::int64_t> loads = EdgeLoads(net, prof);
  Rational cost(0);
  for (std::size_t e = 0; e < loads.size(); ++e) {
    cost += LatencyEval(net.edges()[e].latency, loads[e]) * loads[e];
  }
  return cost;
}

Rational GroupAverageCost(const Network& net, const AggregateProfile& prof,
                          std::size_t group) {
  const GroupSpec& spec = net.groups().at(group);
  Rational total(0);
  for (std::size_t s = 0; s < spec.strategies.size(); ++s) {
    if (prof.count(group, s) == 0) continue;
    total += StrategyCost(net, prof, group, s) * prof.count(group, s);
  }
  return total / spec.size;
}

Rational SourceDisparity(const Network& net, const AggregateProfile& prof,
                         std::string_view group_a, std::string_view group_b) {
  const std::size_t a = GroupByName(net, group_a);
  const std::size_t b = GroupByName(net, group_b);
  if (a == b) {
    CheckProfile(net, prof);
    return Rational(0);
  }
  return GroupAverageCost(net, prof, a) - GroupAverageCost(net, prof, b);
}

Rational RosenthalPotential(const Network& net, const AggregateProfile& prof) {
  const std::vector<std::int64_t> loads = EdgeLoads(net, prof);
  Rational phi(0);
  for (std::size_t e = 0; e < loads.size(); ++e) {
    const AffineLatency& f = net.edges()[e].latency;
    const std::int64_t x = loads[e];
    phi += f.base * x + f.slope * (x * (x + 1) / 2);
  }
  return phi;
}

CostReport Analyze(const Network& net, const AggregateProfile& prof) {
  CostReport report;
  const std::vector<std::int64_t> loads = EdgeLoads(net, prof);
  for (std::size_t e = 0; e < loads.size(); ++e) {
    report.edge_loads[net.edges()[e].id] = loads[e];
  }
  for (std::size_t g = 0; g < net.groups().size(); ++g) {
    auto& costs = report.per_strategy_cost.emplace_back();
    for (std::size_t s = 0; s < net.groups()[g].strategies.size(); ++s) {
      costs.push_back(StrategyCost(net, prof, g, s));
    }
    report.per_group_avg.push_back(GroupAverageCost(net, prof, g));
  }
  report.social_cost = SocialCost(net, prof);
  report.potential = RosenthalPotential(net, prof);
  return report;
}

namespace {

std::string Both(const Rational& r) {
  return FormatDecimal(r, 6) + "  # " + FormatRational(r);
}

}  // namespace

std::string FormatCostReport(const Network& net, const AggregateProfile& prof,
                             const CostReport& report) {
  std::ostringstream out;
  out << "scenario: " << net.name() << "\n";
  out << "profile: \"" << prof.ToString() << "\"\n";
  out << "social_cost: " << Both(report.social_cost) << "\n";
  out << "potential: " << Both(report.potential) << "\n";
  out << "edge_loads:\n";
  for (const Edge& e : net.edges()) {
    out << "  " << e.id << ": " << report.edge_loads.at(e.id) << "\n";
  }
  out << "groups:\n";
  for (std::size_t g = 0; g < net.groups().size(); ++g) {
    const GroupSpec& spec = net.groups()[g];
    out << "  - name: " << spec.name << "\n";
    out << "    avg_cost: " << Both(report.per_group_avg[g]) << "\n";
    out << "    strategies:\n";
    for (std::size_t s = 0; s < spec.strategies.size(); ++s) {
      out << "      - {index: " << s;
      if (!spec.strategies[s].name.empty()) out << ", name: " << spec.strategies[s].name;
      out << ", count: " << prof.count(g, s)
          << ", cost: " << FormatDecimal(report.per_strategy_cost[g][s], 6) << "}\n";
    }
  }
  return out.str();
}

AggregateProfile ParseProfile(const Network& net, std::string_view text) {
  std::map<std::string, std::vector<std::int64_t>> named;
  // Groups are separated by ';' or whitespace.
  std::string s(text);
  for (char& c : s) {
    if (c == ';') c = ' ';
  }
  std::istringstream groups(s);
  std::string item;
  while (groups >> item) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("profile entry '" + item + "' lacks '='");
    }
    std::vector<std::int64_t> counts;
    std::istringstream values(item.substr(eq + 1));
    std::string v;
    while (std::getline(values, v, ',')) {
      const Rational r = ParseRational(v);
      if (r.denominator() != 1) throw std::invalid_argument("non-integer count '" + v + "'");
      counts.push_back(r.numerator());
    }
    named[item.substr(0, eq)] = std::move(counts);
  }
  if (named.size() != net.groups().size()) {
    throw std::invalid_argument("profile must list every group exactly once");
  }
  return AggregateProfile::FromNamed(net, named);
}

}  // namespace fairnet
