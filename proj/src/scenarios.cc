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

#include "fairnet/scenarios.h"

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <yaml-cpp/yaml.h>

#include "fairnet/game.h"
#include "fairnet/solvers.h"

namespace fairnet {
namespace {

Edge AffineEdge(std::string id, NodeId src, NodeId dst, Rational base, Rational slope) {
  Edge e;
  e.id = std::move(id);
  e.src = std::move(src);
  e.dst = std::move(dst);
  e.latency = AffineLatency{base, slope};
  return e;
}

Strategy Named(std::string name, std::vector<std::string> edges) {
  return Strategy{std::move(name), Path{std::move(edges)}};
}

struct MetroEdgeSpec {
  const char* id;
  const char* src;
  const char* dst;
  MetroPhase since;
};

constexpr std::array<MetroEdgeSpec, 7> kMetroEdges = {{
    {"WS", "W", "S", MetroPhase::kA},
    {"SA", "S", "A", MetroPhase::kA},
    {"AC", "A", "C", MetroPhase::kA},
    {"EA", "E", "A", MetroPhase::kA},
    {"ES", "E", "S", MetroPhase::kA},
    {"SC", "S", "C", MetroPhase::kB},
    {"WA", "W", "A", MetroPhase::kC},
}};

std::string PhaseName(MetroPhase p) { return std::string(1, MetroPhaseId(p)); }

}  // namespace

BraessCalibration ParseBraessCalibration(std::string_view id) {
  if (id == "decoupled-diamond") return BraessCalibration::kDecoupledDiamond;
  if (id == "literal-coupled") return BraessCalibration::kLiteralCoupled;
  throw std::invalid_argument("unknown Braess calibration '" + std::string(id) + "'");
}

std::string_view BraessCalibrationId(BraessCalibration c) {
  return c == BraessCalibration::kDecoupledDiamond ? "decoupled-diamond" : "literal-coupled";
}

Network BuildBraess(bool intervention, BraessCalibration calibration,
                    std::int64_t n_per_source) {
  if (n_per_source < 1) throw std::invalid_argument("n_per_source must be >= 1");
  const Rational flow(1, n_per_source);
  const std::string suffix = intervention ? "post" : "pre";
  std::vector<Edge> edges;
  std::vector<GroupSpec> groups;
  std::vector<NodeId> nodes;

  if (calibration == BraessCalibration::kLiteralCoupled) {
    nodes = {"S1", "S2", "C", "D", "B"};
    edges = {AffineEdge("S1C", "S1", "C", 0, flow), AffineEdge("CB", "C", "B", 0, flow),
             AffineEdge("S2D", "S2", "D", 0, flow), AffineEdge("DB", "D", "B", 0, flow),
             AffineEdge("S1D", "S1", "D", 1, 0),    AffineEdge("S2C", "S2", "C", 1, 0)};
    if (intervention) edges.push_back(AffineEdge("CD", "C", "D", 0, 0));
    GroupSpec s1{"S1", "S1", n_per_source,
                 {Named("Up", {"S1C", "CB"}), Named("Down", {"S1D", "DB"})}};
    GroupSpec s2{"S2", "S2", n_per_source,
                 {Named("Up", {"S2C", "CB"}), Named("Down", {"S2D", "DB"})}};
    if (intervention) {
      s1.strategies.push_back(Named("Cross", {"S1C", "CD", "DB"}));
      s2.strategies.push_back(Named("Cross", {"S2C", "CD", "DB"}));
    }
    groups = {s1, s2};
  } else {
    nodes = {"S1", "S2", "C1", "D1", "C2", "D2", "B"};
    for (const std::string src : {"S1", "S2"}) {
      const std::string k = src.substr(1);
      const std::string c = "C" + k;
      const std::string d = "D" + k;
      edges.push_back(AffineEdge(src + c, src, c, 0, flow));
      edges.push_back(AffineEdge(c + "B", c, "B", 1, 0));
      edges.push_back(AffineEdge(src + d, src, d, 1, 0));
      edges.push_back(AffineEdge(d + "B", d, "B", 0, flow));
      if (intervention) edges.push_back(AffineEdge(c + d, c, d, 0, 0));
      GroupSpec g{src, src, n_per_source,
                  {Named("Up", {src + c, c + "B"}), Named("Down", {src + d, d + "B"})}};
      if (intervention) g.strategies.push_back(Named("Cross", {src + c, c + d, d + "B"}));
      groups.push_back(std::move(g));
    }
  }

  const std::string cal(BraessCalibrationId(calibration));
  return Network(std::move(nodes), std::move(edges), "B", std::move(groups),
                 "braess_" + suffix + "_" + cal,
                 "two-source Braess network, " + cal + (intervention ? ", with C->D link" : ""));
}

MetroPhase ParseMetroPhase(std::string_view id) {
  if (id == "A" || id == "a") return MetroPhase::kA;
  if (id == "B" || id == "b") return MetroPhase::kB;
  if (id == "C" || id == "c") return MetroPhase::kC;
  throw std::invalid_argument("unknown metro phase '" + std::string(id) + "'");
}

char MetroPhaseId(MetroPhase phase) {
  switch (phase) {
    case MetroPhase::kA: return 'A';
    case MetroPhase::kB: return 'B';
    case MetroPhase::kC: return 'C';
  }
  return '?';
}

std::vector<std::string> MetroEdges(MetroPhase phase) {
  std::vector<std::string> out;
  for (const MetroEdgeSpec& e : kMetroEdges) {
    if (static_cast<int>(e.since) <= static_cast<int>(phase)) out.emplace_back(e.id);
  }
  return out;
}

Network BuildAmsterdam(MetroPhase phase, const FreeFlowTable& t0, std::int64_t n_per_source,
                       std::optional<std::int64_t> capacity) {
  if (n_per_source < 1) throw std::invalid_argument("n_per_source must be >= 1");
  const bool population_capacity = !capacity.has_value();
  const Rational k(population_capacity ? 2 * n_per_source : *capacity);
  if (k <= 0) throw std::invalid_argument("capacity must be positive");

  std::vector<Edge> edges;
  for (const std::string& id : MetroEdges(phase)) {
    auto it = t0.find(id);
    if (it == t0.end() || it->second <= 0) {
      throw std::invalid_argument("missing or nonpositive t0 for metro edge '" + id + "'");
    }
    const MetroEdgeSpec* spec = nullptr;
    for (const MetroEdgeSpec& e : kMetroEdges) {
      if (id == e.id) spec = &e;
    }
    Edge e;
    e.id = id;
    e.src = spec->src;
    e.dst = spec->dst;
    e.latency = MakeVolumeDelay(it->second, k);
    e.volume_delay = VolumeDelay{it->second, k, population_capacity};
    edges.push_back(std::move(e));
  }

  GroupSpec west{"W", "W", n_per_source, {Named("W-S-A-C", {"WS", "SA", "AC"})}};
  GroupSpec east{"E", "E", n_per_source,
                 {Named("E-A-C", {"EA", "AC"}), Named("E-S-A-C", {"ES", "SA", "AC"})}};
  if (phase != MetroPhase::kA) {
    west.strategies.push_back(Named("W-S-C", {"WS", "SC"}));
    east.strategies.push_back(Named("E-S-C", {"ES", "SC"}));
  }
  if (phase == MetroPhase::kC) west.strategies.push_back(Named("W-A-C", {"WA", "AC"}));

  const std::string p = PhaseName(phase);
  static const char* kPhaseNotes[] = {"before the North-South line",
                                      "with the North-South line",
                                      "with the West-Amstel link"};
  return Network({"W", "S", "E", "A", "C"}, std::move(edges), "C", {west, east},
                 "amsterdam_" + std::string(1, static_cast<char>(std::tolower(p[0]))),
                 std::string("metro abstraction, phase ") + p + ", " +
                     kPhaseNotes[static_cast<int>(phase)]);
}

const std::array<MetroTarget, 3>& MetroTargets() {
  static const std::array<MetroTarget, 3> kTargets = {{
      {MetroPhase::kA, Rational(9700), Rational(27)},
      {MetroPhase::kB, Rational(7349), Rational(1375, 100)},
      {MetroPhase::kC, Rational(6648), Rational(452, 100)},
  }};
  return kTargets;
}

CalibrationSpace CalibrationSpace::Uniform(std::int64_t lo, std::int64_t hi) {
  if (lo < 1 || lo > hi) throw std::invalid_argument("calibration range must satisfy 1 <= lo <= hi");
  CalibrationSpace space;
  for (const MetroEdgeSpec& e : kMetroEdges) {
    auto& c = space.candidates[e.id];
    for (std::int64_t v = lo; v <= hi; ++v) c.push_back(v);
  }
  return space;
}

namespace {

// Uniform-start equilibrium of one phase on a mutable kernel.
struct PhaseEval {
  std::int64_t total = 0;  // scaled
  Rational sd{0};
};

class PhaseModel {
 public:
  PhaseModel(MetroPhase phase, std::int64_t n)
      : phase_(phase), net_(BuildAmsterdam(phase, UnitTable(), n)), kernel_(CompileExact(net_)) {
    order_ = GroupNameOrder(net_);
    capacity_ = net_.edges().front().volume_delay->capacity.numerator();
    if (kernel_.scale() != capacity_) throw std::logic_error("unexpected kernel scale");
    for (const MetroEdgeSpec& e : kMetroEdges) {
      auto idx = net_.edge_index(e.id);
      edge_of_.push_back(idx ? static_cast<int>(*idx) : -1);
    }
  }

  void SetT0(std::size_t metro_edge, std::int64_t t0) {
    const int e = edge_of_[metro_edge];
    if (e >= 0) kernel_.set_latency(static_cast<std::size_t>(e), capacity_ * t0, t0);
  }

  PhaseEval Solve() const {
    AggregateProfile prof = detail::UniformProfile(kernel_);
    detail::DescendToNash(kernel_, order_, prof, kDefaultNashIterationBudget);
    std::vector<std::int64_t> loads;
    kernel_.ComputeLoads(prof, loads);
    std::int64_t sum[2] = {0, 0};
    for (std::size_t g = 0; g < 2; ++g) {
      for (std::size_t s = 0; s < kernel_.num_strategies(g); ++s) {
        if (prof.count(g, s) > 0) sum[g] += prof.count(g, s) * kernel_.PathCost(g, s, loads);
      }
    }
    const std::int64_t nw = kernel_.group_size(0);
    const std::int64_t ne = kernel_.group_size(1);
    PhaseEval out;
    out.total = kernel_.SocialCost(loads);
    out.sd = Rational(sum[0] * ne - sum[1] * nw, nw * ne * kernel_.scale());
    return out;
  }

  // Cheap necessary condition for an efficient equilibrium: social-cost
  // descent from the equilibrium finds nothing cheaper.
  bool Screen() const {
    AggregateProfile prof = detail::UniformProfile(kernel_);
    detail::DescendToNash(kernel_, order_, prof, kDefaultNashIterationBudget);
    const std::int64_t ne = detail::SocialCostScaled(kernel_, prof);
    const AggregateProfile lower = detail::SteepestSocialDescent(kernel_, std::move(prof));
    return detail::SocialCostScaled(kernel_, lower) >= ne;
  }

  MetroPhase phase() const { return phase_; }
  std::int64_t scale() const { return kernel_.scale(); }

 private:
  static FreeFlowTable UnitTable() {
    FreeFlowTable t;
    for (const MetroEdgeSpec& e : kMetroEdges) t[e.id] = 1;
    return t;
  }

  MetroPhase phase_;
  Network net_;
  ExactKernel kernel_;
  std::vector<std::size_t> order_;
  std::int64_t capacity_ = 1;
  std::vector<int> edge_of_;
};

double RelErr(const Rational& value, const Rational& target) {
  return ToDouble((value - target) / target);
}

double PhaseError(const PhaseEval& eval, std::int64_t scale, const MetroTarget& target) {
  const double a = RelErr(Rational(eval.total, scale), target.ne_total);
  const double b = RelErr(eval.sd, target.sd);
  return a * a + b * b;
}

// Fills solver residuals for a fixed table; returns false if some phase has
// an equilibrium costlier than the certified optimum.
bool Certify(const FreeFlowTable& t0, std::int64_t n, CalibrationResult& result) {
  result.phases.clear();
  result.objective = 0.0;
  bool efficient = true;
  for (const MetroTarget& target : MetroTargets()) {
    const Network net = BuildAmsterdam(target.phase, t0, n);
    const NashSearch ne = MultiStartNash(net);
    const EquilibriumResult so = SocialOptimum(net);
    PhaseResidual r;
    r.phase = target.phase;
    r.ne_total = ne.from_uniform.total_cost;
    r.sd = ne.from_uniform.per_group_avg[0] - ne.from_uniform.per_group_avg[1];
    r.target_ne = target.ne_total;
    r.target_sd = target.sd;
    r.so_total = so.total_cost;
    r.worst_ne_total = ne.worst.total_cost;
    r.rel_err_ne = RelErr(r.ne_total, r.target_ne);
    r.rel_err_sd = RelErr(r.sd, r.target_sd);
    result.objective += r.rel_err_ne * r.rel_err_ne + r.rel_err_sd * r.rel_err_sd;
    if (!so.certified || r.worst_ne_total != r.so_total || r.ne_total != r.so_total) {
      efficient = false;
    }
    result.phases.push_back(r);
  }
  return efficient;
}

}  // namespace

CalibrationResult EvaluateAmsterdam(const FreeFlowTable& t0, std::int64_t n_per_source) {
  CalibrationResult result;
  result.t0 = t0;
  Certify(t0, n_per_source, result);
  result.tables_evaluated = 1;
  return result;
}

CalibrationResult CalibrateAmsterdam(const CalibrationSpace& space, std::int64_t n_per_source) {
  std::vector<const std::vector<std::int64_t>*> cand;
  for (const MetroEdgeSpec& e : kMetroEdges) {
    auto it = space.candidates.find(e.id);
    if (it == space.candidates.end() || it->second.empty()) {
      throw std::invalid_argument(std::string("empty search space for edge '") + e.id + "'");
    }
    cand.push_back(&it->second);
  }

  PhaseModel a(MetroPhase::kA, n_per_source);
  PhaseModel b(MetroPhase::kB, n_per_source);
  PhaseModel c(MetroPhase::kC, n_per_source);
  const auto& targets = MetroTargets();

  double best = std::numeric_limits<double>::infinity();
  std::optional<CalibrationResult> accepted;
  std::int64_t evaluated = 0;
  std::int64_t rejected = 0;
  std::vector<std::int64_t> pick(kMetroEdges.size(), 0);

  auto set = [&](std::size_t edge, std::int64_t v) {
    pick[edge] = v;
    a.SetT0(edge, v);
    b.SetT0(edge, v);
    c.SetT0(edge, v);
  };

  // Objective of the table in `pick`, or infinity when it fails screening.
  auto objective = [&]() {
    for (std::size_t k = 0; k < kMetroEdges.size(); ++k) set(k, pick[k]);
    const double total = PhaseError(a.Solve(), a.scale(), targets[0]) +
                         PhaseError(b.Solve(), b.scale(), targets[1]) +
                         PhaseError(c.Solve(), c.scale(), targets[2]);
    if (!a.Screen() || !b.Screen() || !c.Screen()) {
      return std::numeric_limits<double>::infinity();
    }
    return total;
  };
  auto offer = [&](double total) {
    CalibrationResult r;
    for (std::size_t k = 0; k < kMetroEdges.size(); ++k) r.t0[kMetroEdges[k].id] = pick[k];
    if (!Certify(r.t0, n_per_source, r)) return false;
    best = total;
    accepted = std::move(r);
    return true;
  };

  // Coordinate descent from the middle of the space gives an incumbent, so
  // the exhaustive pass below can prune from the start.
  for (std::size_t k = 0; k < cand.size(); ++k) pick[k] = (*cand[k])[cand[k]->size() / 2];
  if (const double start = objective(); start < best) offer(start);
  for (bool improved = true; improved;) {
    improved = false;
    for (std::size_t k = 0; k < cand.size(); ++k) {
      const std::int64_t keep = pick[k];
      std::int64_t chosen = keep;
      for (std::int64_t v : *cand[k]) {
        pick[k] = v;
        const double total = objective();
        if (total < best && offer(total)) {
          chosen = v;
          improved = true;
        }
      }
      pick[k] = chosen;
    }
  }

  // Edges 0..4 exist from phase A, 5 from B, 6 from C; each phase's error
  // only depends on the prefix that exists, so partial sums bound the total.
  std::function<void(std::size_t)> over_a = [&](std::size_t edge) {
    if (edge < 5) {
      for (std::int64_t v : *cand[edge]) {
        set(edge, v);
        over_a(edge + 1);
      }
      return;
    }
    const double err_a = PhaseError(a.Solve(), a.scale(), targets[0]);
    ++evaluated;
    if (err_a >= best) return;
    for (std::int64_t sc : *cand[5]) {
      set(5, sc);
      const double err_ab = err_a + PhaseError(b.Solve(), b.scale(), targets[1]);
      if (err_ab >= best) continue;
      for (std::int64_t wa : *cand[6]) {
        set(6, wa);
        const double total = err_ab + PhaseError(c.Solve(), c.scale(), targets[2]);
        if (total >= best) continue;
        if (!a.Screen() || !b.Screen() || !c.Screen()) {
          ++rejected;
          continue;
        }
        CalibrationResult r;
        for (std::size_t k = 0; k < kMetroEdges.size(); ++k) r.t0[kMetroEdges[k].id] = pick[k];
        if (Certify(r.t0, n_per_source, r)) {
          best = total;
          accepted = std::move(r);
        } else {
          ++rejected;
        }
      }
    }
  };
  over_a(0);

  if (!accepted) throw std::invalid_argument("no candidate table passed certification");
  accepted->tables_evaluated = evaluated;
  accepted->tables_rejected_poa = rejected;
  return *accepted;
}

std::string FormatCalibrationReport(const CalibrationResult& result) {
  YAML::Emitter y;
  y.SetDoublePrecision(17);
  y << YAML::BeginMap;
  y << YAML::Key << "objective" << YAML::Value << result.objective;
  y << YAML::Key << "tables_evaluated" << YAML::Value << result.tables_evaluated;
  y << YAML::Key << "tables_rejected_poa" << YAML::Value << result.tables_rejected_poa;
  y << YAML::Key << "t0" << YAML::Value << YAML::Flow << YAML::BeginMap;
  for (const MetroEdgeSpec& e : kMetroEdges) {
    auto it = result.t0.find(e.id);
    if (it != result.t0.end()) y << YAML::Key << e.id << YAML::Value << FormatRational(it->second);
  }
  y << YAML::EndMap;
  y << YAML::Key << "phases" << YAML::Value << YAML::BeginSeq;
  for (const PhaseResidual& p : result.phases) {
    y << YAML::BeginMap;
    y << YAML::Key << "phase" << YAML::Value << PhaseName(p.phase);
    y << YAML::Key << "ne_total" << YAML::Value << FormatRational(p.ne_total);
    y << YAML::Key << "target_ne" << YAML::Value << FormatRational(p.target_ne);
    y << YAML::Key << "sd" << YAML::Value << FormatRational(p.sd);
    y << YAML::Key << "target_sd" << YAML::Value << FormatRational(p.target_sd);
    y << YAML::Key << "so_total" << YAML::Value << FormatRational(p.so_total);
    y << YAML::Key << "worst_ne_total" << YAML::Value << FormatRational(p.worst_ne_total);
    y << YAML::Key << "ne_total_decimal" << YAML::Value << FormatDecimal(p.ne_total, 4);
    y << YAML::Key << "sd_decimal" << YAML::Value << FormatDecimal(p.sd, 4);
    y << YAML::Key << "rel_err_ne" << YAML::Value << p.rel_err_ne;
    y << YAML::Key << "rel_err_sd" << YAML::Value << p.rel_err_sd;
    y << YAML::EndMap;
  }
  y << YAML::EndSeq;
  y << YAML::EndMap;
  return "# Free-flow calibration of the metro abstraction.\n"
         "# Regenerate with: fairnet calibrate --write-scenarios scenarios\n" +
         std::string(y.c_str()) + "\n";
}

CalibrationResult ParseCalibrationReport(std::string_view text) {
  const YAML::Node root = YAML::Load(std::string(text));
  CalibrationResult r;
  r.objective = root["objective"].as<double>();
  r.tables_evaluated = root["tables_evaluated"].as<std::int64_t>();
  r.tables_rejected_poa = root["tables_rejected_poa"].as<std::int64_t>();
  for (const auto& kv : root["t0"]) {
    r.t0[kv.first.as<std::string>()] = ParseRational(kv.second.as<std::string>());
  }
  for (const auto& p : root["phases"]) {
    PhaseResidual pr;
    pr.phase = ParseMetroPhase(p["phase"].as<std::string>());
    pr.ne_total = ParseRational(p["ne_total"].as<std::string>());
    pr.target_ne = ParseRational(p["target_ne"].as<std::string>());
    pr.sd = ParseRational(p["sd"].as<std::string>());
    pr.target_sd = ParseRational(p["target_sd"].as<std::string>());
    pr.so_total = ParseRational(p["so_total"].as<std::string>());
    pr.worst_ne_total = ParseRational(p["worst_ne_total"].as<std::string>());
    pr.rel_err_ne = p["rel_err_ne"].as<double>();
    pr.rel_err_sd = p["rel_err_sd"].as<double>();
    r.phases.push_back(pr);
  }
  return r;
}

const std::vector<ScenarioPreset>& Presets() {
  static const std::vector<ScenarioPreset> kPresets = {
      {"braess_pre", "braess_pre.scn",
       "Two-source Braess network, decoupled calibration, before the C->D link.\n"
       "Each source owns a classic diamond; equilibrium total 300, optimum 300."},
      {"braess_post", "braess_post.scn",
       "Two-source Braess network, decoupled calibration, after the C->D link.\n"
       "Worst equilibrium total 400 (everyone on Cross), optimum 300, PoA 4/3.\n"
       "Best-response dynamics from the even split stop at 9901/25."},
      {"braess_pre_literal", "braess_pre_literal.scn",
       "Two-source Braess network, literal reading: both sources share C and D.\n"
       "This variant does NOT reproduce the headline 300/400 totals: the worst\n"
       "equilibrium costs 400 and the optimum 350 already before the C->D link.\n"
       "Kept for comparison; use braess_pre.scn for the headline numbers."},
      {"braess_post_literal", "braess_post_literal.scn",
       "Two-source Braess network, literal reading, with the C->D link.\n"
       "Worst equilibrium 400, optimum 350, PoA 8/7; the headline post-link\n"
       "optimum of 300 is out of reach here. Use braess_post.scn instead."},
      {"amsterdam_a", "amsterdam_a.scn", "Metro abstraction, phase A (no North-South line).\nFree-flow minutes from amsterdam_calibration.txt."},
      {"amsterdam_b", "amsterdam_b.scn", "Metro abstraction, phase B (North-South line adds S->C).\nFree-flow minutes from amsterdam_calibration.txt."},
      {"amsterdam_c", "amsterdam_c.scn", "Metro abstraction, phase C (W->A link added).\nFree-flow minutes from amsterdam_calibration.txt."},
  };
  return kPresets;
}

Network BuildPreset(std::string_view name, const FreeFlowTable& t0) {
  if (name == "braess_pre") return BuildBraess(false, BraessCalibration::kDecoupledDiamond);
  if (name == "braess_post") return BuildBraess(true, BraessCalibration::kDecoupledDiamond);
  if (name == "braess_pre_literal") return BuildBraess(false, BraessCalibration::kLiteralCoupled);
  if (name == "braess_post_literal") return BuildBraess(true, BraessCalibration::kLiteralCoupled);
  if (name == "amsterdam_a") return BuildAmsterdam(MetroPhase::kA, t0);
  if (name == "amsterdam_b") return BuildAmsterdam(MetroPhase::kB, t0);
  if (name == "amsterdam_c") return BuildAmsterdam(MetroPhase::kC, t0);
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

}  // namespace fairnet
