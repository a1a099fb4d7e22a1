#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "ncsched/waterfill.hpp"
#include "support/instances.hpp"
#include "support/oracles.hpp"

namespace ncsched {
namespace {

constexpr double kN0 = kThermalNoiseMwPerMhz;
constexpr double kW = 6.0;
constexpr double kNoCap = 1e300;

std::vector<ChannelGain> random_gains(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> gain_db(-125, -105);
  std::vector<ChannelGain> g;
  for (int k = 0; k < n; ++k) g.push_back({k + 1, std::pow(10.0, gain_db(rng) / 10.0)});
  return g;
}

TEST(WaterFill, ZeroDemand) {
  const std::vector<ChannelGain> g{{23, 1e-11}};
  const auto r = water_fill(g, 0.0, kW, kN0, kNoCap);
  EXPECT_EQ(r.total_power, 0.0);
  EXPECT_EQ(r.achieved_rate, 0.0);
  EXPECT_TRUE(r.active_set.empty());
}

TEST(WaterFill, SingleChannelInverseFormula) {
  const double g = 3e-11;
  const std::vector<ChannelGain> gains{{23, g}};
  const auto r = water_fill(gains, 6.0, kW, kN0, kNoCap);
  EXPECT_NEAR(r.total_power / (6.0 * kN0 / g), 1.0, 1e-12);
  EXPECT_NEAR(r.achieved_rate, 6.0, 1e-12);
}

TEST(WaterFill, EqualGainsSplitEvenly) {
  const double g = 2e-11;
  const std::vector<ChannelGain> gains{{1, g}, {2, g}};
  const double demand = 30.0;
  const auto r = water_fill(gains, demand, kW, kN0, kNoCap);
  const double expect = (std::pow(2.0, demand / (2 * kW)) - 1) * kN0 * kW / g;
  EXPECT_NEAR(r.loads[0].power_mw / expect, 1.0, 1e-12);
  EXPECT_NEAR(r.loads[1].power_mw / expect, 1.0, 1e-12);
}

TEST(WaterFill, TwoChannelsMatchGridSearch) {
  // Both channels are active once 2^(r/W) exceeds the 10x level ratio,
  // i.e. r > W log2(10) ~ 19.9 Mbps.
  const double g2 = 1e-11;
  const double g1 = 10 * g2;
  for (double demand : {25.0, 40.0, 75.0, 150.0}) {
    const std::vector<ChannelGain> gains{{1, g1}, {2, g2}};
    const auto r = water_fill(gains, demand, kW, kN0, kNoCap);
    ASSERT_EQ(r.active_set.size(), 2U);
    const auto oracle = testing::two_channel_grid_search(g1, g2, demand, kW, kN0);
    EXPECT_NEAR(r.loads[0].power_mw / oracle.p1, 1.0, 1e-6) << demand;
    EXPECT_NEAR(r.loads[1].power_mw / oracle.p2, 1.0, 1e-6) << demand;
    EXPECT_NEAR(r.total_power / oracle.total, 1.0, 1e-6) << demand;
  }
}

TEST(WaterFill, WeakChannelStaysDryAtLowDemand) {
  const std::vector<ChannelGain> gains{{1, 1e-10}, {2, 1e-11}};
  const auto r = water_fill(gains, 10.0, kW, kN0, kNoCap);
  EXPECT_EQ(r.active_set, std::vector<int>{1});
  EXPECT_EQ(r.power_of(2), 0.0);
  EXPECT_LE(r.water_level, kN0 * kW / 1e-11);
}

TEST(WaterFill, RandomSetsMeetDemandAndShareOneLevel) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> demand(0.5, 300);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 12)(rng);
    const auto gains = random_gains(rng, n);
    const double r = demand(rng);
    const auto wf = water_fill(gains, r, kW, kN0, kNoCap);
    EXPECT_NEAR(wf.achieved_rate / r, 1.0, 1e-9);
    for (std::size_t k = 0; k < gains.size(); ++k) {
      const double c = kN0 * kW / gains[k].gain;
      if (wf.loads[k].power_mw > 0) {
        EXPECT_LE(std::abs(wf.loads[k].power_mw + c - wf.water_level), 1e-9 * wf.water_level);
      } else {
        EXPECT_LE(wf.water_level, c * (1 + 1e-12));
      }
    }
  }
}

TEST(WaterFill, MonotoneInDemandAndGain) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    auto gains = random_gains(rng, std::uniform_int_distribution<int>(1, 8)(rng));
    const double r = std::uniform_real_distribution<double>(1, 150)(rng);
    const double base = water_fill(gains, r, kW, kN0, kNoCap).total_power;
    EXPECT_GE(water_fill(gains, r * 1.1, kW, kN0, kNoCap).total_power, base * (1 - 1e-12));

    auto better = gains;
    const auto k = std::uniform_int_distribution<std::size_t>(0, better.size() - 1)(rng);
    better[k].gain *= 1.5;
    EXPECT_LE(water_fill(better, r, kW, kN0, kNoCap).total_power, base * (1 + 1e-12));
  }
}

TEST(WaterFill, AddingChannelNeverHurts) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    auto gains = random_gains(rng, std::uniform_int_distribution<int>(2, 9)(rng));
    const double r = std::uniform_real_distribution<double>(1, 150)(rng);
    const double full = water_fill(gains, r, kW, kN0, kNoCap).total_power;
    gains.pop_back();
    EXPECT_LE(full, water_fill(gains, r, kW, kN0, kNoCap).total_power * (1 + 1e-12));
  }
}

TEST(WaterFill, CapClampsAndRedistributes) {
  const std::vector<ChannelGain> gains{{1, 1e-10}, {2, 2e-11}, {3, 1e-11}};
  const double demand = 30.0;
  const auto free = water_fill(gains, demand, kW, kN0, kNoCap);
  const double cap = free.loads[0].power_mw * 0.8;
  const auto capped = water_fill(gains, demand, kW, kN0, cap);
  EXPECT_TRUE(capped.cap_binding);
  EXPECT_DOUBLE_EQ(capped.loads[0].power_mw, cap);
  EXPECT_NEAR(capped.achieved_rate / demand, 1.0, 1e-9);
  EXPECT_GT(capped.total_power, free.total_power);
  for (std::size_t k = 1; k < gains.size(); ++k) {
    const double c = kN0 * kW / gains[k].gain;
    if (capped.loads[k].power_mw > 0) {
      EXPECT_NEAR(capped.loads[k].power_mw + c, capped.water_level, 1e-9 * capped.water_level);
    }
    EXPECT_LE(capped.loads[k].power_mw, cap);
  }
  // The clamped channel would still take more than the cap at this level.
  EXPECT_GE(capped.water_level - kN0 * kW / gains[0].gain, cap);
}

TEST(WaterFill, InfeasibleUnderCapReportsShortfall) {
  const std::vector<ChannelGain> gains{{1, 1e-11}, {2, 1e-11}};
  const double cap = 10.0;
  const double max_rate = 2 * channel_rate(cap, 1e-11, kW, kN0);
  try {
    water_fill(gains, max_rate + 5.0, kW, kN0, cap);
    FAIL() << "expected InfeasibleError";
  } catch (const InfeasibleError& e) {
    EXPECT_NEAR(e.shortfall_mbps(), 5.0, 1e-9);
  }
}

TEST(WaterFill, RejectsBadInput) {
  EXPECT_THROW(water_fill({}, 1.0, kW, kN0, kNoCap), ValidationError);
  const std::vector<ChannelGain> zero{{1, 0.0}};
  EXPECT_THROW(water_fill(zero, 1.0, kW, kN0, kNoCap), ValidationError);
  const std::vector<ChannelGain> ok{{1, 1e-11}};
  EXPECT_THROW(water_fill(ok, -1.0, kW, kN0, kNoCap), ValidationError);
}

TEST(EqualFlow, SingleChannelMatchesWaterFill) {
  const std::vector<ChannelGain> g{{4, 7e-12}};
  const auto p = equal_flow_power(g, 33.0, kW, kN0);
  EXPECT_NEAR(p[0] / water_fill(g, 33.0, kW, kN0, kNoCap).total_power, 1.0, 1e-12);
}

TEST(EqualFlow, EqualGainsGiveEqualPowers) {
  const std::vector<ChannelGain> g{{1, 5e-12}, {2, 5e-12}, {3, 5e-12}, {4, 5e-12}};
  const auto p = equal_flow_power(g, 80.0, kW, kN0);
  for (double v : p) EXPECT_DOUBLE_EQ(v, p[0]);
  double rate = 0;
  for (std::size_t k = 0; k < g.size(); ++k) rate += channel_rate(p[k], g[k].gain, kW, kN0);
  EXPECT_NEAR(rate, 80.0, 1e-9);
  EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0) /
                  water_fill(g, 80.0, kW, kN0, kNoCap).total_power,
              1.0, 1e-12);
}

TEST(EqualFlow, NeverBeatsWaterFill) {
  const std::vector<ChannelGain> three{{1, 4e-11}, {2, 1e-11}, {3, 2.5e-12}};
  const auto p = equal_flow_power(three, 50.0, kW, kN0);
  EXPECT_GT(std::accumulate(p.begin(), p.end(), 0.0),
            water_fill(three, 50.0, kW, kN0, kNoCap).total_power);

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const auto gains = random_gains(rng, std::uniform_int_distribution<int>(1, 10)(rng));
    const double r = std::uniform_real_distribution<double>(1, 200)(rng);
    const auto eq = equal_flow_power(gains, r, kW, kN0);
    EXPECT_GE(std::accumulate(eq.begin(), eq.end(), 0.0),
              water_fill(gains, r, kW, kN0, kNoCap).total_power * (1 - 1e-12));
  }
}

TEST(BuildReport, AttributesPowerToOwners) {
  const auto grid = testing::grid_with_gains({23, 24, 26}, {1e-11, 2e-11, 3e-11});
  RadioParams p;
  const auto report = build_report(grid, p, 40.0, Assignment({{23, 24}, {26}}), SolveMeta{"x"});
  ASSERT_EQ(report.allocation.entries.size(), 3U);
  for (const auto& e : report.allocation.entries) {
    EXPECT_EQ(e.front_end, e.index == 26 ? 1 : 0);
  }
  EXPECT_NEAR(report.achieved_rate() / 40.0, 1.0, 1e-9);
  EXPECT_NEAR(report.breakdown.converter, 25.4 * (12 + 6), 1e-9);
}

}  // namespace
}  // namespace ncsched
