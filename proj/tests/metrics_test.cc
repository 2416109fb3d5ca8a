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
#include <random>
#include <stdexcept>
#include <tuple>

#include "gtest/gtest.h"

namespace fairnet {
namespace {

const OptimumReference kSo{300.0, true};

std::vector<TrajectoryRecord> MakeRun(const std::vector<double>& costs, double sd_offset) {
  std::vector<StepSummary> steps;
  for (double c : costs) steps.push_back({c, {c / 200.0 + sd_offset, c / 200.0}});
  return BuildTrajectory(steps, kSo, 0, 1);
}

TEST(PolAtTest, Examples) {
  EXPECT_DOUBLE_EQ(PolAt(300.0, kSo), 1.0);
  EXPECT_NEAR(PolAt(400.0, kSo), 4.0 / 3.0, 1e-12);
  EXPECT_THROW(PolAt(1.0, {0.0, true}), std::domain_error);
  EXPECT_THROW(PolAt(1.0, {-2.0, true}), std::domain_error);
  EXPECT_THROW(PolAt(400.0, {300.0, false}), std::invalid_argument);
  EXPECT_NEAR(PolAt(400.0, {300.0, false}, true), 4.0 / 3.0, 1e-12);
}

TEST(SmoothTest, Examples) {
  const std::vector<double> s = {3.0, 1.0, 4.0, 1.0, 5.0};
  EXPECT_EQ(Smooth(s, 1), s);
  const std::vector<double> flat(10, 2.5);
  EXPECT_EQ(Smooth(flat, 4), flat);
  std::vector<double> alt;
  for (int i = 0; i < 12; ++i) alt.push_back(i % 2 == 0 ? 0.0 : 2.0);
  const std::vector<double> smoothed = Smooth(alt, 2);
  EXPECT_DOUBLE_EQ(smoothed[0], 0.0);
  for (std::size_t i = 1; i < smoothed.size(); ++i) EXPECT_DOUBLE_EQ(smoothed[i], 1.0);
  EXPECT_THROW(Smooth(s, 0), std::invalid_argument);
  EXPECT_TRUE(Smooth(std::vector<double>{}, 3).empty());
}

TEST(SmoothTest, WindowLongerThanSeriesAveragesPrefix) {
  const std::vector<double> s = {1.0, 2.0, 6.0};
  EXPECT_EQ(Smooth(s, 10), (std::vector<double>{1.0, 1.5, 3.0}));
}

TEST(BuildTrajectoryTest, PolAndDisparity) {
  const auto run = MakeRun({300.0, 400.0}, 0.25);
  ASSERT_EQ(run.size(), 2u);
  EXPECT_EQ(run[1].step, 1);
  EXPECT_NEAR(run[1].pol, 4.0 / 3.0, 1e-12);
  EXPECT_NEAR(run[0].sd, 0.25, 1e-12);
  std::vector<StepSummary> steps = {{300.0, {1.0, 2.0}}};
  EXPECT_THROW(BuildTrajectory(steps, {300.0, false}, 0, 1), std::invalid_argument);
}

TEST(AggregateRunsTest, OneSeed) {
  const auto run = MakeRun({300.0, 360.0, 330.0}, 0.5);
  const AggregateTrajectory agg = AggregateRuns({run}, 2);
  ASSERT_EQ(agg.pol.size(), 3u);
  EXPECT_EQ(agg.seeds, 1u);
  for (std::size_t t = 0; t < 3; ++t) {
    EXPECT_DOUBLE_EQ(agg.pol[t].mean, run[t].pol);
    EXPECT_DOUBLE_EQ(agg.pol[t].sd, 0.0);
    EXPECT_DOUBLE_EQ(agg.pol[t].ci95, 0.0);
    EXPECT_DOUBLE_EQ(agg.sd[t].mean, run[t].sd);
  }
  EXPECT_DOUBLE_EQ(agg.pol_smooth[2], (run[1].pol + run[2].pol) / 2.0);
}

TEST(AggregateRunsTest, IdenticalSeedsHaveZeroSpread) {
  const auto run = MakeRun({310.0, 320.0}, 0.1);
  const AggregateTrajectory agg = AggregateRuns({run, run, run}, 1);
  for (const PointStats& p : agg.social_cost) EXPECT_DOUBLE_EQ(p.sd, 0.0);
  EXPECT_DOUBLE_EQ(agg.social_cost[1].mean, 320.0);
  EXPECT_DOUBLE_EQ(agg.group_avg_mean[1][1], 320.0 / 200.0);
}

TEST(AggregateRunsTest, MeanSdAndInterval) {
  const AggregateTrajectory agg =
      AggregateRuns({MakeRun({300.0}, 0.0), MakeRun({330.0}, 0.0), MakeRun({360.0}, 0.0)}, 1);
  EXPECT_DOUBLE_EQ(agg.social_cost[0].mean, 330.0);
  EXPECT_DOUBLE_EQ(agg.social_cost[0].sd, 30.0);
  EXPECT_NEAR(agg.social_cost[0].ci95, 1.96 * 30.0 / std::sqrt(3.0), 1e-12);
}

TEST(AggregateRunsTest, PermutationInvariant) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> cost(300.0, 400.0);
  std::vector<std::vector<TrajectoryRecord>> runs;
  for (int k = 0; k < 17; ++k) {
    std::vector<double> c;
    for (int t = 0; t < 25; ++t) c.push_back(cost(gen));
    runs.push_back(MakeRun(c, 0.01 * k));
  }
  const AggregateTrajectory a = AggregateRuns(runs, 5);
  std::shuffle(runs.begin(), runs.end(), gen);
  const AggregateTrajectory b = AggregateRuns(runs, 5);
  for (std::size_t t = 0; t < a.pol.size(); ++t) {
    EXPECT_EQ(a.pol[t].mean, b.pol[t].mean);
    EXPECT_EQ(a.pol[t].sd, b.pol[t].sd);
    EXPECT_EQ(a.sd[t].mean, b.sd[t].mean);
    EXPECT_EQ(a.group_avg_mean[t], b.group_avg_mean[t]);
  }
  EXPECT_EQ(a.pol_smooth, b.pol_smooth);
}

TEST(AggregateRunsTest, Errors) {
  EXPECT_THROW(AggregateRuns({}, 1), std::invalid_argument);
  EXPECT_THROW(AggregateRuns({MakeRun({300.0}, 0.0), MakeRun({300.0, 310.0}, 0.0)}, 1),
               std::invalid_argument);
  EXPECT_THROW(AggregateRuns({MakeRun({300.0}, 0.0)}, 0), std::invalid_argument);
}

TEST(ResolveAlphasTest, Examples) {
  auto [a, b] = ResolveAlphas(0.2, Rational(1));
  EXPECT_DOUBLE_EQ(a, 0.2);
  EXPECT_DOUBLE_EQ(b, 0.2);
  std::tie(a, b) = ResolveAlphas(0.2, Rational(5));
  EXPECT_NEAR(a, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(b, 1.0 / 15.0, 1e-15);
  std::tie(a, b) = ResolveAlphas(0.2, Rational(1, 5));
  EXPECT_NEAR(a, 1.0 / 15.0, 1e-15);
  EXPECT_NEAR(b, 1.0 / 3.0, 1e-15);
}

TEST(ResolveAlphasTest, MeanAndRatioPreservedAndSwapSymmetric) {
  for (const Rational& r : {Rational(5), Rational(4), Rational(3), Rational(2), Rational(1),
                            Rational(1, 2), Rational(1, 3), Rational(1, 4), Rational(1, 5)}) {
    const auto [a, b] = ResolveAlphas(0.2, r);
    EXPECT_NEAR((a + b) / 2.0, 0.2, 1e-15);
    EXPECT_NEAR(a / b, ToDouble(r), 1e-12);
    const auto [c, d] = ResolveAlphas(0.2, 1 / r);
    EXPECT_DOUBLE_EQ(a, d);
    EXPECT_DOUBLE_EQ(b, c);
  }
}

TEST(ResolveAlphasTest, Errors) {
  EXPECT_THROW(ResolveAlphas(0.0, Rational(1)), std::invalid_argument);
  EXPECT_THROW(ResolveAlphas(0.2, Rational(0)), std::invalid_argument);
  EXPECT_THROW(ResolveAlphas(0.2, Rational(-1)), std::invalid_argument);
  EXPECT_THROW(ResolveAlphas(0.9, Rational(5)), std::invalid_argument);  // 1.5 > 1
}

TEST(TailMeanTest, Window) {
  const std::vector<double> s = {1.0, 2.0, 3.0, 4.0};
  EXPECT_DOUBLE_EQ(TailMean(s, 2), 3.5);
  EXPECT_DOUBLE_EQ(TailMean(s, 100), 2.5);
  EXPECT_THROW(TailMean(std::vector<double>{}, 1), std::invalid_argument);
}

TEST(SignTestPValueTest, BinomialTail) {
  EXPECT_DOUBLE_EQ(SignTestPValue(0, 10), 1.0);
  EXPECT_NEAR(SignTestPValue(10, 10), 1.0 / 1024.0, 1e-15);
  EXPECT_NEAR(SignTestPValue(9, 10), 11.0 / 1024.0, 1e-14);
  EXPECT_LT(SignTestPValue(26, 40), 0.05);
  EXPECT_GT(SignTestPValue(25, 40), 0.05);
  EXPECT_THROW(SignTestPValue(5, 4), std::invalid_argument);
}

}  // namespace
}  // namespace fairnet
