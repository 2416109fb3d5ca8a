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

#include <stdexcept>

#include "fairnet/scenarios.h"
#include "gtest/gtest.h"
#include "oracle/brute_force.h"
#include "oracle/random_nets.h"

namespace fairnet {
namespace {

Network DecoupledPre() { return BuildBraess(false, BraessCalibration::kDecoupledDiamond); }
Network DecoupledPost() { return BuildBraess(true, BraessCalibration::kDecoupledDiamond); }

TEST(NashSolveTest, BraessPre) {
  const EquilibriumResult ne = NashSolve(DecoupledPre());
  EXPECT_EQ(ne.total_cost, Rational(300));
  EXPECT_TRUE(ne.certified);
  EXPECT_EQ(ne.per_group_avg, (std::vector<Rational>{Rational(3, 2), Rational(3, 2)}));
}

TEST(NashSolveTest, BraessPostWorstEquilibriumIsAllCross) {
  const NashSearch search = MultiStartNash(DecoupledPost());
  EXPECT_EQ(search.worst.total_cost, Rational(400));
  EXPECT_EQ(search.worst.profile, AggregateProfile({{0, 0, 100}, {0, 0, 100}}));
  // From the even split the dynamics stop one agent short of Up and Down
  // on each side.
  EXPECT_EQ(search.from_uniform.total_cost, Rational(9901, 25));
  EXPECT_EQ(search.from_uniform.profile, AggregateProfile({{1, 1, 98}, {1, 1, 98}}));
  for (const EquilibriumResult& r : search.all) EXPECT_TRUE(r.certified);
}

TEST(NashSolveTest, StartProfileIsRespected) {
  const Network net = DecoupledPost();
  const EquilibriumResult ne = NashSolve(net, AggregateProfile({{0, 0, 100}, {0, 0, 100}}));
  EXPECT_EQ(ne.iterations, 0);
  EXPECT_EQ(ne.total_cost, Rational(400));
  EXPECT_THROW(NashSolve(net, AggregateProfile({{1, 2, 3}, {0, 0, 100}})), std::invalid_argument);
}

TEST(NashSolveTest, IterationBudget) {
  NashOptions opts;
  opts.max_iterations = 3;
  EXPECT_THROW(NashSolve(DecoupledPost(), UniformProfile(DecoupledPost()), opts),
               std::runtime_error);
}

TEST(NashSolveTest, PotentialStrictlyDecreasesAlongTrajectory) {
  const Network net = DecoupledPost();
  std::vector<Rational> phis;
  NashOptions opts;
  opts.on_step = [&](const AggregateProfile& p, const Rational& phi) {
    EXPECT_EQ(phi, RosenthalPotential(net, p));
    phis.push_back(phi);
  };
  const EquilibriumResult ne = NashSolve(net, UniformProfile(net), opts);
  ASSERT_EQ(static_cast<std::int64_t>(phis.size()), ne.iterations + 1);
  for (std::size_t i = 1; i < phis.size(); ++i) EXPECT_LT(phis[i], phis[i - 1]);
}

TEST(BestResponseStepTest, CrossBeatsTheEvenSplit) {
  const Network net = DecoupledPost();
  const AggregateProfile split({{50, 50, 0}, {50, 50, 0}});
  // Enumerate every single-agent move and find the largest gain.
  Rational best_gain{0};
  AggregateProfile expected;
  for (std::size_t g = 0; g < 2; ++g) {
    for (std::size_t from = 0; from < 3; ++from) {
      if (split.count(g, from) == 0) continue;
      for (std::size_t to = 0; to < 3; ++to) {
        if (to == from) continue;
        AggregateProfile moved = split;
        moved.Move(g, from, to);
        const Rational gain = StrategyCost(net, split, g, from) - StrategyCost(net, moved, g, to);
        if (gain > best_gain) {
          best_gain = gain;
          expected = moved;
        }
      }
    }
  }
  ASSERT_GT(best_gain, 0);
  EXPECT_EQ(best_gain, Rational(49, 100));
  const BestResponseResult step = BestResponseStep(net, split);
  EXPECT_TRUE(step.improved);
  EXPECT_EQ(step.profile, expected);
  EXPECT_EQ(step.profile, AggregateProfile({{49, 50, 1}, {50, 50, 0}}));
}

TEST(BestResponseStepTest, FixedPoints) {
  const Network net = DecoupledPre();
  const AggregateProfile ne({{50, 50}, {50, 50}});
  const BestResponseResult step = BestResponseStep(net, ne);
  EXPECT_FALSE(step.improved);
  EXPECT_EQ(step.profile, ne);

  Network single({"A", "B"}, {{"AB", "A", "B", {0, 1}}}, "B", {{"G", "A", 4, {{"", {{"AB"}}}}}});
  const BestResponseResult none = BestResponseStep(single, AggregateProfile({std::vector<std::int64_t>{4}}));
  EXPECT_FALSE(none.improved);
  EXPECT_EQ(none.profile, AggregateProfile({std::vector<std::int64_t>{4}}));
}

TEST(BestResponseStepTest, TiesGoToLowestGroupName) {
  // Groups listed out of name order; both have the same best move.
  Network net({"A", "B"}, {{"x", "A", "B", {0, 1}}, {"y", "A", "B", {0, 1}}}, "B",
              {{"Zed", "A", 2, {{"x", {{"x"}}}, {"y", {{"y"}}}}},
               {"Alf", "A", 2, {{"x", {{"x"}}}, {"y", {{"y"}}}}}});
  const BestResponseResult step = BestResponseStep(net, AggregateProfile({{2, 0}, {2, 0}}));
  EXPECT_EQ(step.profile, AggregateProfile({{2, 0}, {1, 1}}));
}

TEST(VerifyNashTest, Examples) {
  EXPECT_TRUE(VerifyNash(DecoupledPre(), AggregateProfile({{50, 50}, {50, 50}})));
  EXPECT_FALSE(VerifyNash(DecoupledPre(), AggregateProfile({{100, 0}, {50, 50}})));
  // Up is strictly dominated by a free parallel link.
  Network net({"A", "B"}, {{"up", "A", "B", {5, 0}}, {"free", "A", "B", {0, 0}}}, "B",
              {{"G", "A", 3, {{"up", {{"up"}}}, {"free", {{"free"}}}}}});
  EXPECT_FALSE(VerifyNash(net, AggregateProfile({{1, 2}})));
  EXPECT_TRUE(VerifyNash(net, AggregateProfile({{0, 3}})));
}

TEST(VerifyNashTest, AgreesWithOracle) {
  const Network coupled = BuildBraess(false, BraessCalibration::kLiteralCoupled);
  const AggregateProfile all_up({{100, 0}, {100, 0}});
  EXPECT_EQ(VerifyNash(coupled, all_up), oracle::IsNash(coupled, all_up.counts()));
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Network net = oracle::RandomNet(seed, {2, 3, 10});
    const AggregateProfile prof = oracle::RandomCounts(net, seed);
    EXPECT_EQ(VerifyNash(net, prof), oracle::IsNash(net, prof.counts())) << seed;
  }
}

TEST(SocialOptimumTest, Braess) {
  const EquilibriumResult pre = SocialOptimum(DecoupledPre());
  EXPECT_EQ(pre.total_cost, Rational(300));
  EXPECT_TRUE(pre.certified);
  const EquilibriumResult post = SocialOptimum(DecoupledPost());
  EXPECT_EQ(post.total_cost, Rational(300));
  EXPECT_TRUE(post.certified);
  EXPECT_EQ(post.profile.count(0, 2), 0);
  EXPECT_EQ(post.profile.count(1, 2), 0);
  EXPECT_EQ(post.iterations, CountProfiles(DecoupledPost()));
}

TEST(SocialOptimumTest, LocalSearchWhenOverBudget) {
  const EquilibriumResult so = SocialOptimum(DecoupledPre(), 10);
  EXPECT_FALSE(so.certified);
  EXPECT_EQ(so.total_cost, Rational(300));
}

TEST(SocialOptimumTest, LexicographicTieBreak) {
  Network net({"A", "B"}, {{"x", "A", "B", {0, 1}}, {"y", "A", "B", {0, 1}}}, "B",
              {{"G", "A", 3, {{"x", {{"x"}}}, {"y", {{"y"}}}}}});
  // [2,1] and [1,2] both cost 5; the smaller profile wins.
  EXPECT_EQ(SocialOptimum(net).profile, AggregateProfile({{1, 2}}));
}

TEST(PriceOfAnarchyTest, Examples) {
  const Network post = DecoupledPost();
  EXPECT_EQ(PriceOfAnarchy(MultiStartNash(post).worst, SocialOptimum(post)), Rational(4, 3));
  const Network pre = DecoupledPre();
  EXPECT_EQ(PriceOfAnarchy(NashSolve(pre), SocialOptimum(pre)), Rational(1));
  const EquilibriumResult so = SocialOptimum(pre);
  EXPECT_EQ(PriceOfAnarchy(so, so), Rational(1));
  EquilibriumResult zero = so;
  zero.total_cost = 0;
  EXPECT_THROW(PriceOfAnarchy(so, zero), std::domain_error);
}

TEST(ProfilesTest, UniformCornersRandomAndCount) {
  const Network post = DecoupledPost();
  EXPECT_EQ(UniformProfile(post), AggregateProfile({{34, 33, 33}, {34, 33, 33}}));
  EXPECT_EQ(CornerProfiles(post).size(), 9u);
  EXPECT_EQ(CountProfiles(DecoupledPre()), 101 * 101);
  EXPECT_EQ(CountProfiles(post), 5151 * 5151);
  EXPECT_EQ(RandomProfile(post, 7), RandomProfile(post, 7));
  EXPECT_NE(RandomProfile(post, 7), RandomProfile(post, 8));
  CheckProfile(post, RandomProfile(post, 9));
}

TEST(MultiStartNashTest, Deterministic) {
  const Network net = oracle::RandomNet(3);
  const NashSearch a = MultiStartNash(net, 8, 42);
  const NashSearch b = MultiStartNash(net, 8, 42);
  ASSERT_EQ(a.all.size(), b.all.size());
  for (std::size_t i = 0; i < a.all.size(); ++i) EXPECT_EQ(a.all[i].profile, b.all[i].profile);
  for (const EquilibriumResult& r : a.all) EXPECT_LE(r.total_cost, a.worst.total_cost);
}

TEST(SolutionTest, EquilibriumIsFixedPointOfDynamics) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const Network net = oracle::RandomNet(seed);
    const EquilibriumResult ne = NashSolve(net);
    EXPECT_EQ(NashSolve(net, ne.profile).profile, ne.profile);
    EXPECT_EQ(NashSolve(net, ne.profile).iterations, 0);
  }
}

}  // namespace
}  // namespace fairnet
