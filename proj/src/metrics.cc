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

#include "fairnet/metrics.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fairnet {

double PolAt(double social_cost, const OptimumReference& so, bool allow_uncertified) {
  if (!(so.cost > 0.0)) throw std::domain_error("social optimum cost must be positive");
  if (!so.certified && !allow_uncertified) {
    throw std::invalid_argument("social optimum is not certified");
  }
  return social_cost / so.cost;
}

std::vector<double> Smooth(std::span<const double> series, int window) {
  if (window < 1) throw std::invalid_argument("smoothing window must be >= 1");
  std::vector<double> out(series.size());
  const auto w = static_cast<std::size_t>(window);
  for (std::size_t i = 0; i < series.size(); ++i) {
    const std::size_t first = i + 1 >= w ? i + 1 - w : 0;
    double sum = 0.0;
    for (std::size_t j = first; j <= i; ++j) sum += series[j];
    out[i] = sum / static_cast<double>(i + 1 - first);
  }
  return out;
}

std::vector<TrajectoryRecord> BuildTrajectory(std::span<const StepSummary> steps,
                                              const OptimumReference& so,
                                              std::size_t group_a, std::size_t group_b,
                                              bool allow_uncertified) {
  std::vector<TrajectoryRecord> out;
  out.reserve(steps.size());
  for (std::size_t t = 0; t < steps.size(); ++t) {
    const StepSummary& s = steps[t];
    TrajectoryRecord r;
    r.step = static_cast<std::int64_t>(t);
    r.social_cost = s.social_cost;
    r.pol = PolAt(s.social_cost, so, allow_uncertified);
    r.sd = s.group_avg_cost.at(group_a) - s.group_avg_cost.at(group_b);
    r.group_avg_cost = s.group_avg_cost;
    out.push_back(std::move(r));
  }
  return out;
}

PointStats Summarize(std::vector<double> values) {
  PointStats p;
  if (values.empty()) return p;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  const auto n = static_cast<double>(values.size());
  p.mean = sum / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - p.mean) * (v - p.mean);
    p.sd = std::sqrt(ss / (n - 1.0));
    p.ci95 = 1.96 * p.sd / std::sqrt(n);
  }
  return p;
}

AggregateTrajectory AggregateRuns(const std::vector<std::vector<TrajectoryRecord>>& runs,
                                  int window) {
  if (runs.empty()) throw std::invalid_argument("no runs to aggregate");
  if (window < 1) throw std::invalid_argument("smoothing window must be >= 1");
  const std::size_t steps = runs.front().size();
  for (const auto& r : runs) {
    if (r.size() != steps) throw std::invalid_argument("runs have different lengths");
  }
  AggregateTrajectory agg;
  agg.seeds = runs.size();
  agg.window = window;
  std::vector<double> buf(runs.size());
  auto column = [&](std::size_t t, auto field) {
    for (std::size_t k = 0; k < runs.size(); ++k) buf[k] = field(runs[k][t]);
    return Summarize(buf);
  };
  for (std::size_t t = 0; t < steps; ++t) {
    agg.social_cost.push_back(column(t, [](const TrajectoryRecord& r) { return r.social_cost; }));
    agg.pol.push_back(column(t, [](const TrajectoryRecord& r) { return r.pol; }));
    agg.sd.push_back(column(t, [](const TrajectoryRecord& r) { return r.sd; }));
    const std::size_t groups = runs.front()[t].group_avg_cost.size();
    auto& means = agg.group_avg_mean.emplace_back();
    for (std::size_t g = 0; g < groups; ++g) {
      means.push_back(
          column(t, [g](const TrajectoryRecord& r) { return r.group_avg_cost.at(g); }).mean);
    }
  }
  std::vector<double> pol_mean;
  std::vector<double> sd_mean;
  for (std::size_t t = 0; t < steps; ++t) {
    pol_mean.push_back(agg.pol[t].mean);
    sd_mean.push_back(agg.sd[t].mean);
  }
  agg.pol_smooth = Smooth(pol_mean, window);
  agg.sd_smooth = Smooth(sd_mean, window);
  return agg;
}

std::pair<double, double> ResolveAlphas(double mean_alpha, const Rational& ratio) {
  if (!(mean_alpha > 0.0 && mean_alpha <= 1.0)) {
    throw std::invalid_argument("mean learning rate must be in (0, 1]");
  }
  if (ratio <= 0) throw std::invalid_argument("learning-rate ratio must be positive");
  const double num = static_cast<double>(ratio.numerator());
  const double den = static_cast<double>(ratio.denominator());
  // r = num/den; a1 = 2 m r / (1 + r) = 2 m num / (den + num).
  const double first = 2.0 * mean_alpha * num / (den + num);
  const double second = 2.0 * mean_alpha * den / (den + num);
  for (double a : {first, second}) {
    if (!(a > 0.0 && a <= 1.0)) {
      throw std::invalid_argument("resolved learning rate " + std::to_string(a) +
                                  " outside (0, 1]");
    }
  }
  return {first, second};
}

double TailMean(std::span<const double> series, std::size_t window) {
  if (series.empty()) throw std::invalid_argument("empty series");
  const std::size_t n = std::min(window, series.size());
  double sum = 0.0;
  for (std::size_t i = series.size() - n; i < series.size(); ++i) sum += series[i];
  return sum / static_cast<double>(n);
}

double SignTestPValue(int successes, int trials) {
  if (trials < 0 || successes < 0 || successes > trials) {
    throw std::invalid_argument("invalid sign test counts");
  }
  double p = 0.0;
  for (int k = successes; k <= trials; ++k) {
    p += std::exp(std::lgamma(trials + 1.0) - std::lgamma(k + 1.0) -
                  std::lgamma(trials - k + 1.0) - trials * std::log(2.0));
  }
  return std::min(1.0, p);
}

}  // namespace fairnet
