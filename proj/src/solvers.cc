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

#include "fairnet/solvers.h"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "fairnet/random.h"

namespace fairnet {
namespace {

EquilibriumResult MakeResult(const ExactKernel& kernel, AggregateProfile prof,
                             SolutionKind kind, std::int64_t iterations, bool certified) {
  std::vector<std::int64_t> loads;
  kernel.ComputeLoads(prof, loads);
  EquilibriumResult r;
  r.total_cost = Rational(kernel.SocialCost(loads), kernel.scale());
  for (std::size_t g = 0; g < kernel.num_groups(); ++g) {
    std::int64_t total = 0;
    for (std::size_t s = 0; s < kernel.num_strategies(g); ++s) {
      if (prof.count(g, s) > 0) total += prof.count(g, s) * kernel.PathCost(g, s, loads);
    }
    r.per_group_avg.push_back(Rational(total, kernel.scale() * kernel.group_size(g)));
  }
  r.profile = std::move(prof);
  r.kind = kind;
  r.iterations = iterations;
  r.certified = certified;
  return r;
}

// All compositions of n into k parts, lexicographic, flattened.
std::vector<std::int64_t> Compositions(std::int64_t n, std::size_t k) {
  std::vector<std::int64_t> out;
  std::vector<std::int64_t> cur(k, 0);
  std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t i, std::int64_t left) {
    if (i + 1 == k) {
      cur[i] = left;
      out.insert(out.end(), cur.begin(), cur.end());
      return;
    }
    for (std::int64_t v = 0; v <= left; ++v) {
      cur[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, n);
  return out;
}

std::int64_t SaturatingBinomial(std::int64_t n, std::int64_t k) {
  // C(n, k) with k small; saturates at INT64_MAX.
  long double r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
  }
  if (r >= static_cast<long double>(std::numeric_limits<std::int64_t>::max())) {
    return std::numeric_limits<std::int64_t>::max();
  }
  return static_cast<std::int64_t>(r + 0.5L);
}

// Change in social cost when one agent of g moves from -> to.
std::int64_t SocialDelta(const ExactKernel& kernel, std::size_t g, std::size_t from,
                         std::size_t to, const std::vector<std::int64_t>& loads) {
  auto term = [&](std::size_t e, std::int64_t x) { return x * kernel.Latency(e, x); };
  std::int64_t delta = 0;
  for (std::size_t e : kernel.path(g, from)) {
    if (kernel.on_path(g, to, e)) continue;
    delta += term(e, loads[e] - 1) - term(e, loads[e]);
  }
  for (std::size_t e : kernel.path(g, to)) {
    if (kernel.on_path(g, from, e)) continue;
    delta += term(e, loads[e] + 1) - term(e, loads[e]);
  }
  return delta;
}

}  // namespace

std::vector<std::size_t> GroupNameOrder(const Network& net) {
  std::vector<std::size_t> order(net.groups().size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return net.groups()[a].name < net.groups()[b].name;
  });
  return order;
}

namespace detail {

std::optional<Move> FindBestMove(const ExactKernel& kernel, const AggregateProfile& prof,
                                 const std::vector<std::int64_t>& loads,
                                 const std::vector<std::size_t>& group_order) {
  std::optional<Move> best;
  for (std::size_t g : group_order) {
    const std::size_t k = kernel.num_strategies(g);
    for (std::size_t s = 0; s < k; ++s) {
      if (prof.count(g, s) == 0) continue;
      const std::int64_t current = kernel.PathCost(g, s, loads);
      for (std::size_t t = 0; t < k; ++t) {
        if (t == s) continue;
        const std::int64_t gain = current - kernel.MoveCost(g, s, t, loads);
        if (gain > 0 && (!best || gain > best->improvement)) best = Move{g, s, t, gain};
      }
    }
  }
  return best;
}

void ApplyMove(const ExactKernel& kernel, const Move& move, AggregateProfile& prof,
               std::vector<std::int64_t>& loads) {
  for (std::size_t e : kernel.path(move.group, move.from)) --loads[e];
  for (std::size_t e : kernel.path(move.group, move.to)) ++loads[e];
  prof.Move(move.group, move.from, move.to);
}

std::int64_t DescendToNash(
    const ExactKernel& kernel, const std::vector<std::size_t>& group_order,
    AggregateProfile& prof, std::int64_t max_iterations,
    const std::function<void(const AggregateProfile&, std::int64_t)>& on_step) {
  std::vector<std::int64_t> loads;
  kernel.ComputeLoads(prof, loads);
  if (on_step) on_step(prof, kernel.Potential(loads));
  std::int64_t moves = 0;
  while (auto move = FindBestMove(kernel, prof, loads, group_order)) {
    if (moves >= max_iterations) {
      throw std::runtime_error("best-response iteration budget exceeded");
    }
    ApplyMove(kernel, *move, prof, loads);
    ++moves;
    if (on_step) on_step(prof, kernel.Potential(loads));
  }
  return moves;
}

bool IsNash(const ExactKernel& kernel, const AggregateProfile& prof) {
  std::vector<std::int64_t> loads;
  kernel.ComputeLoads(prof, loads);
  for (std::size_t g = 0; g < kernel.num_groups(); ++g) {
    for (std::size_t s = 0; s < kernel.num_strategies(g); ++s) {
      if (prof.count(g, s) == 0) continue;
      const std::int64_t current = kernel.PathCost(g, s, loads);
      for (std::size_t t = 0; t < kernel.num_strategies(g); ++t) {
        if (t != s && kernel.MoveCost(g, s, t, loads) < current) return false;
      }
    }
  }
  return true;
}

OptimumScan EnumerateOptimum(const ExactKernel& kernel) {
  const std::size_t groups = kernel.num_groups();
  const std::size_t edges = kernel.num_edges();

  // Edges shared by two or more groups carry cross terms; the rest of the
  // cost separates by group.
  std::vector<int> users(edges, 0);
  for (std::size_t g = 0; g < groups; ++g) {
    std::vector<char> touched(edges, 0);
    for (std::size_t s = 0; s < kernel.num_strategies(g); ++s) {
      for (std::size_t e : kernel.path(g, s)) touched[e] = 1;
    }
    for (std::size_t e = 0; e < edges; ++e) users[e] += touched[e];
  }
  std::vector<std::size_t> shared;
  for (std::size_t e = 0; e < edges; ++e) {
    if (users[e] >= 2) shared.push_back(e);
  }
  const std::size_t ns = shared.size();

  struct GroupTable {
    std::size_t k = 0;
    std::size_t n = 0;
    std::vector<std::int64_t> comps;
    std::vector<std::int64_t> separable;
    std::vector<std::int64_t> shared_loads;  // n x ns
  };
  std::vector<GroupTable> tables(groups);
  std::vector<std::int64_t> load(edges);
  for (std::size_t g = 0; g < groups; ++g) {
    GroupTable& t = tables[g];
    t.k = kernel.num_strategies(g);
    t.comps = Compositions(kernel.group_size(g), t.k);
    t.n = t.comps.size() / t.k;
    t.separable.resize(t.n);
    t.shared_loads.resize(t.n * ns);
    for (std::size_t i = 0; i < t.n; ++i) {
      std::fill(load.begin(), load.end(), 0);
      for (std::size_t s = 0; s < t.k; ++s) {
        const std::int64_t c = t.comps[i * t.k + s];
        if (c == 0) continue;
        for (std::size_t e : kernel.path(g, s)) load[e] += c;
      }
      t.separable[i] = kernel.SocialCost(load);
      for (std::size_t j = 0; j < ns; ++j) t.shared_loads[i * ns + j] = load[shared[j]];
    }
  }

  std::vector<std::int64_t> two_slope(ns);
  for (std::size_t j = 0; j < ns; ++j) two_slope[j] = 2 * kernel.slope(shared[j]);

  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  std::vector<std::size_t> best_index(groups, 0);
  std::vector<std::size_t> index(groups, 0);
  std::int64_t evaluated = 0;

  std::vector<std::vector<std::int64_t>> partial(groups + 1, std::vector<std::int64_t>(ns, 0));
  std::vector<std::int64_t> weight(ns);
  std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t g, std::int64_t acc) {
    const GroupTable& t = tables[g];
    const std::vector<std::int64_t>& p = partial[g];
    for (std::size_t j = 0; j < ns; ++j) weight[j] = two_slope[j] * p[j];
    if (g + 1 == groups) {
      evaluated += static_cast<std::int64_t>(t.n);
      for (std::size_t i = 0; i < t.n; ++i) {
        std::int64_t c = acc + t.separable[i];
        const std::int64_t* a = &t.shared_loads[i * ns];
        for (std::size_t j = 0; j < ns; ++j) c += weight[j] * a[j];
        if (c < best) {
          best = c;
          index[g] = i;
          best_index = index;
        }
      }
      return;
    }
    const std::vector<std::int64_t> w = weight;
    for (std::size_t i = 0; i < t.n; ++i) {
      std::int64_t c = acc + t.separable[i];
      const std::int64_t* a = &t.shared_loads[i * ns];
      for (std::size_t j = 0; j < ns; ++j) {
        c += w[j] * a[j];
        partial[g + 1][j] = p[j] + a[j];
      }
      index[g] = i;
      rec(g + 1, c);
    }
  };
  rec(0, 0);

  std::vector<std::vector<std::int64_t>> counts(groups);
  for (std::size_t g = 0; g < groups; ++g) {
    const GroupTable& t = tables[g];
    counts[g].assign(t.comps.begin() + static_cast<std::ptrdiff_t>(best_index[g] * t.k),
                     t.comps.begin() + static_cast<std::ptrdiff_t>((best_index[g] + 1) * t.k));
  }
  return OptimumScan{AggregateProfile(std::move(counts)), best, evaluated};
}

AggregateProfile UniformProfile(const ExactKernel& kernel) {
  std::vector<std::vector<std::int64_t>> counts;
  for (std::size_t g = 0; g < kernel.num_groups(); ++g) {
    const auto k = static_cast<std::int64_t>(kernel.num_strategies(g));
    const std::int64_t n = kernel.group_size(g);
    auto& c = counts.emplace_back(static_cast<std::size_t>(k), n / k);
    for (std::int64_t s = 0; s < n % k; ++s) ++c[static_cast<std::size_t>(s)];
  }
  return AggregateProfile(std::move(counts));
}

AggregateProfile SteepestSocialDescent(const ExactKernel& kernel, AggregateProfile prof) {
  std::vector<std::int64_t> loads;
  kernel.ComputeLoads(prof, loads);
  while (true) {
    std::optional<detail::Move> best;
    std::int64_t best_delta = 0;
    for (std::size_t g = 0; g < kernel.num_groups(); ++g) {
      for (std::size_t s = 0; s < kernel.num_strategies(g); ++s) {
        if (prof.count(g, s) == 0) continue;
        for (std::size_t t = 0; t < kernel.num_strategies(g); ++t) {
          if (t == s) continue;
          const std::int64_t d = SocialDelta(kernel, g, s, t, loads);
          if (d < best_delta) {
            best_delta = d;
            best = detail::Move{g, s, t, -d};
          }
        }
      }
    }
    if (!best) return prof;
    detail::ApplyMove(kernel, *best, prof, loads);
  }
}

std::int64_t SocialCostScaled(const ExactKernel& kernel, const AggregateProfile& prof) {
  std::vector<std::int64_t> loads;
  kernel.ComputeLoads(prof, loads);
  return kernel.SocialCost(loads);
}

}  // namespace detail

BestResponseResult BestResponseStep(const Network& net, const AggregateProfile& prof) {
  const ExactKernel kernel = CompileExact(net);
  CheckProfile(net, prof);
  std::vector<std::int64_t> loads;
  kernel.ComputeLoads(prof, loads);
  BestResponseResult out{prof, false};
  if (auto move = detail::FindBestMove(kernel, prof, loads, GroupNameOrder(net))) {
    detail::ApplyMove(kernel, *move, out.profile, loads);
    out.improved = true;
  }
  return out;
}

AggregateProfile UniformProfile(const Network& net) {
  return detail::UniformProfile(CompileExact(net));
}

AggregateProfile RandomProfile(const Network& net, std::uint64_t seed) {
  RequireValid(net);
  Rng rng(seed);
  std::vector<std::vector<std::int64_t>> counts;
  for (const GroupSpec& g : net.groups()) {
    auto& c = counts.emplace_back(g.strategies.size(), 0);
    for (std::int64_t i = 0; i < g.size; ++i) ++c[rng.UniformIndex(c.size())];
  }
  return AggregateProfile(std::move(counts));
}

std::vector<AggregateProfile> CornerProfiles(const Network& net) {
  RequireValid(net);
  std::vector<AggregateProfile> out;
  std::vector<std::vector<std::int64_t>> counts;
  std::function<void(std::size_t)> rec = [&](std::size_t g) {
    if (g == net.groups().size()) {
      out.emplace_back(counts);
      return;
    }
    const GroupSpec& spec = net.groups()[g];
    for (std::size_t s = 0; s < spec.strategies.size(); ++s) {
      counts.emplace_back(spec.strategies.size(), 0)[s] = spec.size;
      rec(g + 1);
      counts.pop_back();
    }
  };
  rec(0);
  return out;
}

EquilibriumResult NashSolve(const Network& net, const AggregateProfile& start,
                            const NashOptions& options) {
  const ExactKernel kernel = CompileExact(net);
  CheckProfile(net, start);
  AggregateProfile prof = start;
  std::function<void(const AggregateProfile&, std::int64_t)> hook;
  if (options.on_step) {
    hook = [&](const AggregateProfile& p, std::int64_t phi) {
      options.on_step(p, Rational(phi, kernel.scale()));
    };
  }
  const std::int64_t moves =
      detail::DescendToNash(kernel, GroupNameOrder(net), prof, options.max_iterations, hook);
  const bool verified = detail::IsNash(kernel, prof);
  return MakeResult(kernel, std::move(prof), SolutionKind::kNash, moves, verified);
}

EquilibriumResult NashSolve(const Network& net) {
  return NashSolve(net, UniformProfile(net));
}

bool VerifyNash(const Network& net, const AggregateProfile& prof) {
  const ExactKernel kernel = CompileExact(net);
  CheckProfile(net, prof);
  return detail::IsNash(kernel, prof);
}

std::int64_t CountProfiles(const Network& net) {
  RequireValid(net);
  long double total = 1;
  for (const GroupSpec& g : net.groups()) {
    const auto k = static_cast<std::int64_t>(g.strategies.size());
    total *= static_cast<long double>(SaturatingBinomial(g.size + k - 1, k - 1));
  }
  if (total >= static_cast<long double>(std::numeric_limits<std::int64_t>::max())) {
    return std::numeric_limits<std::int64_t>::max();
  }
  return static_cast<std::int64_t>(total + 0.5L);
}

EquilibriumResult SocialOptimum(const Network& net, std::int64_t budget) {
  const ExactKernel kernel = CompileExact(net);
  if (CountProfiles(net) <= budget) {
    detail::OptimumScan scan = detail::EnumerateOptimum(kernel);
    return MakeResult(kernel, std::move(scan.profile), SolutionKind::kSocialOptimum,
                      scan.evaluated, true);
  }

  // Restart 0 begins at the uniform-start equilibrium, the rest at random
  // profiles; descent uses single-agent moves on the social cost.
  std::optional<AggregateProfile> best;
  std::int64_t best_cost = 0;
  for (int r = 0; r < kLocalSearchRestarts; ++r) {
    AggregateProfile start;
    if (r == 0) {
      start = detail::UniformProfile(kernel);
      detail::DescendToNash(kernel, GroupNameOrder(net), start, kDefaultNashIterationBudget);
    } else {
      start = RandomProfile(net, DeriveSeed(0x50C1A1, static_cast<std::uint64_t>(r)));
    }
    AggregateProfile local = detail::SteepestSocialDescent(kernel, std::move(start));
    const std::int64_t c = detail::SocialCostScaled(kernel, local);
    if (!best || c < best_cost || (c == best_cost && local < *best)) {
      best = std::move(local);
      best_cost = c;
    }
  }
  return MakeResult(kernel, std::move(*best), SolutionKind::kSocialOptimum,
                    kLocalSearchRestarts, false);
}

Rational PriceOfAnarchy(const EquilibriumResult& ne, const EquilibriumResult& so) {
  if (so.total_cost <= 0) throw std::domain_error("social optimum cost must be positive");
  return ne.total_cost / so.total_cost;
}

NashSearch MultiStartNash(const Network& net, int random_starts, std::uint64_t seed) {
  const ExactKernel kernel = CompileExact(net);
  const std::vector<std::size_t> order = GroupNameOrder(net);

  std::vector<AggregateProfile> starts{detail::UniformProfile(kernel)};
  std::int64_t corners = 1;
  for (const GroupSpec& g : net.groups()) corners *= static_cast<std::int64_t>(g.strategies.size());
  if (corners <= 64) {
    for (AggregateProfile& p : CornerProfiles(net)) starts.push_back(std::move(p));
  }
  for (int k = 0; k < random_starts; ++k) {
    starts.push_back(RandomProfile(net, DeriveSeed(seed, static_cast<std::uint64_t>(k))));
  }

  NashSearch out;
  for (AggregateProfile& start : starts) {
    const std::int64_t moves =
        detail::DescendToNash(kernel, order, start, kDefaultNashIterationBudget);
    const bool verified = detail::IsNash(kernel, start);
    out.all.push_back(MakeResult(kernel, std::move(start), SolutionKind::kNash, moves, verified));
  }
  out.from_uniform = out.all.front();
  out.worst = out.all.front();
  for (const EquilibriumResult& r : out.all) {
    if (r.total_cost > out.worst.total_cost) out.worst = r;
  }
  return out;
}

}  // namespace fairnet
