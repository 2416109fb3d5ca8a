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

#ifndef FAIRNET_SCENARIOS_H_
#define FAIRNET_SCENARIOS_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairnet/network.h"
#include "fairnet/rational.h"

namespace fairnet {

// Two-source Braess network. kLiteralCoupled shares the C and D nodes between
// the sources; kDecoupledDiamond gives each source its own classic diamond.
enum class BraessCalibration { kDecoupledDiamond, kLiteralCoupled };

BraessCalibration ParseBraessCalibration(std::string_view id);
std::string_view BraessCalibrationId(BraessCalibration c);

// Groups S1 and S2 of n_per_source agents, destination B. Strategies are
// Up/Down, plus Cross when `intervention` adds the zero-cost link.
Network BuildBraess(bool intervention, BraessCalibration calibration,
                    std::int64_t n_per_source = 100);

enum class MetroPhase { kA, kB, kC };

MetroPhase ParseMetroPhase(std::string_view id);
char MetroPhaseId(MetroPhase phase);

using FreeFlowTable = std::map<std::string, Rational>;

// Edge ids present in `phase`; each phase extends the previous one.
std::vector<std::string> MetroEdges(MetroPhase phase);

// Five-station metro abstraction with groups W and E heading to C. Edge
// latency t0 * (1 + x / K) with K the total population when `capacity` is
// empty. Throws std::invalid_argument if a phase edge has no positive t0.
Network BuildAmsterdam(MetroPhase phase, const FreeFlowTable& t0,
                       std::int64_t n_per_source = 100,
                       std::optional<std::int64_t> capacity = std::nullopt);

struct MetroTarget {
  MetroPhase phase;
  Rational ne_total;
  Rational sd;
};

// Equilibrium total cost and source disparity the calibration aims for.
const std::array<MetroTarget, 3>& MetroTargets();

// Integer candidates for every metro edge id.
struct CalibrationSpace {
  std::map<std::string, std::vector<std::int64_t>> candidates;

  // Every edge gets lo..hi. Throws std::invalid_argument unless 1 <= lo <= hi.
  static CalibrationSpace Uniform(std::int64_t lo, std::int64_t hi);
};

struct PhaseResidual {
  MetroPhase phase = MetroPhase::kA;
  Rational ne_total{0};
  Rational sd{0};
  Rational target_ne{0};
  Rational target_sd{0};
  Rational so_total{0};
  Rational worst_ne_total{0};
  double rel_err_ne = 0.0;
  double rel_err_sd = 0.0;
};

struct CalibrationResult {
  FreeFlowTable t0;
  double objective = 0.0;  // sum of squared relative errors
  std::vector<PhaseResidual> phases;
  std::int64_t tables_evaluated = 0;
  std::int64_t tables_rejected_poa = 0;
};

// Branch-and-bound grid search over `space` minimizing the summed squared
// relative errors of (NE total, SD) over the three phases. NE profiles come
// from best-response dynamics started at the uniform profile. Only tables
// whose worst equilibrium matches the certified optimum in every phase are
// accepted. Throws std::invalid_argument for an empty space or when no
// candidate is accepted.
CalibrationResult CalibrateAmsterdam(const CalibrationSpace& space,
                                     std::int64_t n_per_source = 100);

// Residuals of a fixed table (no search).
CalibrationResult EvaluateAmsterdam(const FreeFlowTable& t0, std::int64_t n_per_source = 100);

std::string FormatCalibrationReport(const CalibrationResult& result);

// Reads back the phase residuals and t0 table written by
// FormatCalibrationReport.
CalibrationResult ParseCalibrationReport(std::string_view text);

struct ScenarioPreset {
  std::string name;
  std::string file;
  std::string notes;
};

const std::vector<ScenarioPreset>& Presets();

// Builds a preset by name; Amsterdam presets use `t0`.
Network BuildPreset(std::string_view name, const FreeFlowTable& t0);

}  // namespace fairnet

#endif  // FAIRNET_SCENARIOS_H_
