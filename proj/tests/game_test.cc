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

#include <stdexcept>

#include "fairnet/scenarios.h"
#include "gtest/gtest.h"
#include "oracle/random_nets.h"

namespace fairnet {
namespace {

Network DecoupledPre() { return BuildBraess(false, BraessCalibration::kDecoupledDiamond); }
Network DecoupledPost() { return BuildBraess(true, BraessCalibration::kDecoupledDiamond); }
Network CoupledPost() { return BuildBraess(true, BraessCalibration::kLiteralCoupled); }

std::int64_t Load(const Network& net, const AggregateProfile& prof, const std::string& id) {
  return EdgeLoads(net, prof)[*net.edge_index(id)];
}

TEST(EdgeLoadsTest, UpAndDownOnDecoupledPre) {
  const Network net = DecoupledPre();
  const AggregateProfile prof({{100, 0}, {0, 100}});
  EXPECT_EQ(Load(net, prof, "S1C1"), 100);
  EXPECT_EQ(Load(net, prof, "C1B"), 100);
  EXPECT_EQ(Load(net, prof, "S1D1"), 0);
  EXPECT_EQ(Load(net, prof, "D1B"), 0);
  EXPECT_EQ(Load(net, prof, "S2D2"), 100);
  EXPECT_EQ(Load(net, prof, "D2B"), 100);
  EXPECT_EQ(Load(net, prof, "S2C2"), 0);
  EXPECT_EQ(Load(net, prof, "C2B"), 0);
}

TEST(EdgeLoadsTest, AllCrossLoadsTheLink) {
  const AggregateProfile cross({{0, 0, 100}, {0, 0, 100}});
  EXPECT_EQ(Load(CoupledPost(), cross, "CD"), 200);
  EXPECT_EQ(Load(DecoupledPost(), cross, "C1D1"), 100);
  EXPECT_EQ(Load(DecoupledPost(), cross, "C2D2"), 100);
}

TEST(EdgeLoadsTest, InvalidProfilesThrow) {
  const Network net = DecoupledPre();
  EXPECT_THROW(EdgeLoads(net, AggregateProfile({{50, 49}, {50, 50}})), std::invalid_argument);
  EXPECT_THROW(EdgeLoads(net, AggregateProfile({{0, 0}, {0, 0}})), std::invalid_argument);
  EXPECT_THROW(EdgeLoads(net, AggregateProfile({{101, -1}, {50, 50}})), std::invalid_argument);
  EXPECT_THROW(EdgeLoads(net, AggregateProfile({{100, 0, 0}, {50, 50}})), std::invalid_argument);
  EXPECT_THROW(EdgeLoads(net, AggregateProfile({{100, 0}})), std::invalid_argument);
}

TEST(StrategyCostTest, Examples) {
  const AggregateProfile cross({{0, 0, 100}, {0, 0, 100}});
  EXPECT_EQ(StrategyCost(DecoupledPost(), cross, 0, 2), Rational(2));
  EXPECT_EQ(StrategyCost(DecoupledPost(), cross, 1, 2), Rational(2));
  // Up at current loads: the shared first leg is full, the second constant.
  EXPECT_EQ(StrategyCost(DecoupledPost(), cross, 0, 0), Rational(2));

  // A path of two constant edges costs 2 whatever the others do.
  Network net({"S2", "C", "B"},
              {{"S2C", "S2", "C", {1, 0}}, {"CB", "C", "B", {1, 0}},
               {"S2B", "S2", "B", {0, 1}}},
              "B", {{"S2", "S2", 5, {{"via_c", {{"S2C", "CB"}}}, {"direct", {{"S2B"}}}}}});
  for (std::int64_t k = 0; k <= 5; ++k) {
    EXPECT_EQ(StrategyCost(net, AggregateProfile({{k, 5 - k}}), 0, 0), Rational(2));
  }
  EXPECT_THROW(StrategyCost(net, AggregateProfile({{5, 0}}), 0, 2), std::invalid_argument);
  EXPECT_THROW(StrategyCost(net, AggregateProfile({{5, 0}}), 1, 0), std::invalid_argument);
}

TEST(SocialCostTest, Examples) {
  EXPECT_EQ(SocialCost(DecoupledPre(), AggregateProfile({{50, 50}, {50, 50}})), Rational(300));
  EXPECT_EQ(SocialCost(DecoupledPost(), AggregateProfile({{0, 0, 100}, {0, 0, 100}})),
            Rational(400));
  Network one({"A", "B"}, {{"AB", "A", "B", {0, 1}}}, "B", {{"G", "A", 1, {{"", {{"AB"}}}}}});
  EXPECT_EQ(SocialCost(one, AggregateProfile({std::vector<std::int64_t>{1}})), Rational(1));
}

TEST(SocialCostTest, AccountingIdentity) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Network net = oracle::RandomNet(seed, {3, 3, 20});
    const AggregateProfile prof = oracle::RandomCounts(net, seed);
    Rational by_strategy{0};
    Rational by_group{0};
    for (std::size_t g = 0; g < net.groups().size(); ++g) {
      for (std::size_t s = 0; s < net.groups()[g].strategies.size(); ++s) {
        by_strategy += prof.count(g, s) * StrategyCost(net, prof, g, s);
      }
      by_group += net.groups()[g].size * GroupAverageCost(net, prof, g);
    }
    EXPECT_EQ(SocialCost(net, prof), by_strategy) << seed;
    EXPECT_EQ(SocialCost(net, prof), by_group) << seed;
  }
}

TEST(EdgeLoadsTest, LoadsSumToPathLengths) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Network net = oracle::RandomNet(seed, {3, 3, 20});
    const AggregateProfile prof = oracle::RandomCounts(net, seed + 1000);
    std::int64_t expected = 0;
    for (std::size_t g = 0; g < net.groups().size(); ++g) {
      for (std::size_t s = 0; s < net.groups()[g].strategies.size(); ++s) {
        expected += prof.count(g, s) *
                    static_cast<std::int64_t>(net.groups()[g].strategies[s].path.edges.size());
      }
    }
    std::int64_t total = 0;
    for (std::int64_t x : EdgeLoads(net, prof)) total += x;
    EXPECT_EQ(total, expected);
  }
}

TEST(SourceDisparityTest, SymmetricAndIdentity) {
  const Network net = DecoupledPost();
  EXPECT_EQ(SourceDisparity(net, AggregateProfile({{50, 50, 0}, {50, 50, 0}}), "S1", "S2"),
            Rational(0));
  const AggregateProfile lopsided({{0, 0, 100}, {50, 50, 0}});
  EXPECT_EQ(SourceDisparity(net, lopsided, "S1", "S1"), Rational(0));
  EXPECT_EQ(SourceDisparity(net, lopsided, "S1", "S2"), Rational(2) - Rational(3, 2));
  EXPECT_THROW(SourceDisparity(net, lopsided, "S1", "S9"), std::invalid_argument);
}

TEST(SourceDisparityTest, Antisymmetric) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Network net = oracle::RandomNet(seed, {3, 3, 15});
    if (net.groups().size() < 2) continue;
    const AggregateProfile prof = oracle::RandomCounts(net, seed);
    EXPECT_EQ(SourceDisparity(net, prof, "S0", "S1"), -SourceDisparity(net, prof, "S1", "S0"));
  }
}

TEST(RosenthalPotentialTest, Examples) {
  Network five({"A", "B"}, {{"AB", "A", "B", {1, 0}}}, "B", {{"G", "A", 5, {{"", {{"AB"}}}}}});
  EXPECT_EQ(RosenthalPotential(five, AggregateProfile({std::vector<std::int64_t>{5}})), Rational(5));
  const ExactKernel empty(1, {}, {}, {}, {});
  EXPECT_EQ(empty.Potential({}), 0);
}

TEST(RosenthalPotentialTest, BraessPreEquilibriumIsStrictLocalMinimum) {
  const Network net = DecoupledPre();
  const AggregateProfile ne({{50, 50}, {50, 50}});
  const Rational phi = RosenthalPotential(net, ne);
  for (std::size_t g = 0; g < 2; ++g) {
    for (std::size_t from = 0; from < 2; ++from) {
      AggregateProfile moved = ne;
      moved.Move(g, from, 1 - from);
      EXPECT_GT(RosenthalPotential(net, moved), phi);
    }
  }
}

// A unilateral move changes the potential by exactly the mover's cost change.
TEST(RosenthalPotentialTest, ExactPotentialProperty) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Network net = oracle::RandomNet(seed, {3, 3, 12});
    const AggregateProfile prof = oracle::RandomCounts(net, seed * 7);
    for (std::size_t g = 0; g < net.groups().size(); ++g) {
      const std::size_t k = net.groups()[g].strategies.size();
      for (std::size_t from = 0; from < k; ++from) {
        if (prof.count(g, from) == 0) continue;
        for (std::size_t to = 0; to < k; ++to) {
          if (to == from) continue;
          AggregateProfile moved = prof;
          moved.Move(g, from, to);
          EXPECT_EQ(RosenthalPotential(net, moved) - RosenthalPotential(net, prof),
                    StrategyCost(net, moved, g, to) - StrategyCost(net, prof, g, from));
        }
      }
    }
  }
}

TEST(KernelTest, ExactAndFloatAgree) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Network net = oracle::RandomNet(seed, {3, 3, 25});
    const AggregateProfile prof = oracle::RandomCounts(net, seed);
    const ExactKernel exact = CompileExact(net);
    const FloatKernel fl = CompileFloat(net);
    std::vector<std::int64_t> loads;
    exact.ComputeLoads(prof, loads);
    EXPECT_EQ(loads, EdgeLoads(net, prof));
    EXPECT_EQ(Rational(exact.SocialCost(loads), exact.scale()), SocialCost(net, prof));
    EXPECT_NEAR(fl.SocialCost(loads), ToDouble(SocialCost(net, prof)), 1e-9);
    EXPECT_EQ(Rational(exact.Potential(loads), exact.scale()), RosenthalPotential(net, prof));
  }
}

TEST(ProfileTest, ParseAndFormat) {
  const Network net = DecoupledPost();
  const AggregateProfile prof = ParseProfile(net, "S2=34,33,33;S1=50,50,0");
  EXPECT_EQ(prof.ToString(), "[50,50,0][34,33,33]");
  EXPECT_THROW(ParseProfile(net, "S1=50,50,0"), std::invalid_argument);
  EXPECT_THROW(ParseProfile(net, "S1=50,50,0;S3=1,2,97"), std::invalid_argument);
  EXPECT_THROW(ParseProfile(net, "S1=50,50;S2=34,33,33"), std::invalid_argument);
  EXPECT_THROW(ParseProfile(net, "S1=50,50,0;S2=34,33,x"), std::invalid_argument);
  EXPECT_THROW(ParseProfile(net, "S1 50,50,0;S2=34,33,33"), std::invalid_argument);
}

TEST(ProfileTest, MoveRequiresAnAgent) {
  AggregateProfile prof({{0, 3}});
  prof.Move(0, 1, 0);
  EXPECT_EQ(prof, AggregateProfile({{1, 2}}));
  EXPECT_THROW(AggregateProfile({{0, 3}}).Move(0, 0, 1), std::invalid_argument);
}

TEST(AnalyzeTest, ReportShowsExactAndDecimal) {
  const Network net = DecoupledPost();
  const AggregateProfile prof({{1, 1, 98}, {1, 1, 98}});
  const CostReport report = Analyze(net, prof);
  EXPECT_EQ(report.social_cost, Rational(9901, 25));
  EXPECT_EQ(report.edge_loads.at("C1D1"), 98);
  EXPECT_EQ(report.potential, RosenthalPotential(net, prof));
  const std::string text = FormatCostReport(net, prof, report);
  EXPECT_NE(text.find("9901/25"), std::string::npos) << text;
  EXPECT_NE(text.find("396.04"), std::string::npos) << text;
}

TEST(CompileExactTest, RejectsInvalidNetworks) {
  Network bad({"A", "B"}, {{"AB", "A", "B", {1, 0}}}, "B", {{"G", "A", 0, {{"", {{"AB"}}}}}});
  EXPECT_THROW(CompileExact(bad), std::invalid_argument);
}

}  // namespace
}  // namespace fairnet
