#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "ncsched/model.hpp"
#include "support/instances.hpp"

namespace ncsched {
namespace {

using testing::kWidth;

TEST(SpectrumSpan, EmptySetIsZero) { EXPECT_EQ(spectrum_span({}, 6.0), 0.0); }

TEST(SpectrumSpan, SingleChannelIsOneWidth) {
  const std::vector<int> s{23};
  EXPECT_EQ(spectrum_span(s, 6.0), 6.0);
}

TEST(SpectrumSpan, CountsNulledChannelsInside) {
  const std::vector<int> s{23, 24, 26};
  EXPECT_EQ(spectrum_span(s, 6.0), 24.0);
}

TEST(SpectrumSpan, PermutationAndInteriorInsertionInvariant) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> s;
    const int n = std::uniform_int_distribution<int>(1, 8)(rng);
    for (int k = 0; k < n; ++k) s.push_back(std::uniform_int_distribution<int>(1, 60)(rng));
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    const double base = spectrum_span(s, kWidth);
    ASSERT_GE(base, 0.0);

    auto shuffled = s;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(spectrum_span(shuffled, kWidth), base);

    auto grown = s;
    grown.push_back(std::uniform_int_distribution<int>(s.front(), s.back())(rng));
    EXPECT_EQ(spectrum_span(grown, kWidth), base);
  }
}

TEST(ChannelRate, ZeroPowerZeroRate) { EXPECT_EQ(channel_rate(0, 1e-11, 6, 4e-12), 0.0); }

TEST(ChannelRate, UnitSnrGivesOneBitPerHertz) {
  const double g = 2e-11;
  const double n0 = kThermalNoiseMwPerMhz;
  const double p = n0 * 6 / g;
  EXPECT_NEAR(channel_rate(p, g, 6, n0), 6.0, 1e-12);
}

TEST(ChannelRate, InverseRoundTrip) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> log_rate(std::log(0.01), std::log(1000.0));
  std::uniform_real_distribution<double> log_gain(std::log(1e-14), std::log(1e-9));
  for (int trial = 0; trial < 2000; ++trial) {
    const double r = std::exp(log_rate(rng));
    const double g = std::exp(log_gain(rng));
    const double p = inverse_rate(r, g, kWidth, kThermalNoiseMwPerMhz);
    EXPECT_NEAR(channel_rate(p, g, kWidth, kThermalNoiseMwPerMhz) / r, 1.0, 1e-12) << r;
  }
}

TEST(ChannelRate, MonotoneInPower) {
  double prev = 0;
  for (double p = 0.1; p < 1e4; p *= 1.7) {
    const double r = channel_rate(p, 1e-11, kWidth, kThermalNoiseMwPerMhz);
    EXPECT_GT(r, prev);
    prev = r;
  }
}

TEST(ChannelGrid, RejectsBadInput) {
  EXPECT_THROW(ChannelGrid({{1, 500, 1e-11}}, 0.0), ValidationError);
  EXPECT_THROW(ChannelGrid({{1, 500, 0.0}}, 6.0), ValidationError);
  EXPECT_THROW(ChannelGrid({{1, 500, -1.0}}, 6.0), ValidationError);
  EXPECT_THROW(ChannelGrid({{2, 500, 1e-11}, {2, 506, 1e-11}}, 6.0), ValidationError);
  EXPECT_THROW(ChannelGrid({{3, 500, 1e-11}, {2, 506, 1e-11}}, 6.0), ValidationError);
}

TEST(ChannelGrid, StrongestBreaksTiesTowardLowerIndex) {
  const auto grid = testing::grid_with_gains({5, 7, 9}, {1e-11, 3e-11, 3e-11});
  EXPECT_EQ(grid[grid.strongest()].index, 7);
}

TEST(RadioParams, DefaultsAreValidAndRejectBadValues) {
  RadioParams p;
  EXPECT_NO_THROW(p.validate());
  EXPECT_DOUBLE_EQ(p.fixed_per_front_end(), 327.7);
  EXPECT_DOUBLE_EQ(p.converter_per_mhz(), 25.4);

  auto bad = p;
  bad.k_pa = 0.5;
  EXPECT_THROW(bad.validate(), ValidationError);
  bad = p;
  bad.num_front_ends = 0;
  EXPECT_THROW(bad.validate(), ValidationError);
  bad = p;
  bad.alpha2 = -1;
  EXPECT_THROW(bad.validate(), ValidationError);
  bad = p;
  bad.big_a = 0;
  EXPECT_THROW(bad.validate(), ValidationError);
}

TEST(Assignment, EnforcesDisjointness) {
  Assignment a(2);
  a.add(0, 23);
  EXPECT_THROW(a.add(1, 23), ValidationError);
  EXPECT_THROW(Assignment({{1, 2}, {2, 3}}), ValidationError);
  EXPECT_THROW(a.add(2, 24), ValidationError);
}

TEST(Assignment, SpansAndActivity) {
  Assignment a({{26, 23, 24}, {}});
  EXPECT_EQ(a.set(0), (std::vector<int>{23, 24, 26}));
  EXPECT_DOUBLE_EQ(a.span_mhz(0, 6), 24.0);
  EXPECT_DOUBLE_EQ(a.span_mhz(1, 6), 0.0);
  EXPECT_TRUE(a.active(0));
  EXPECT_FALSE(a.active(1));
  EXPECT_EQ(a.num_active(), 1);
  EXPECT_EQ(a.owner_of(24), 0);
  EXPECT_EQ(a.owner_of(25), -1);
}

TEST(Assignment, ValidateChecksGridMembership) {
  const auto grid = testing::grid_with_gains({23, 24}, {1e-11, 1e-11});
  RadioParams p;
  EXPECT_NO_THROW(Assignment({{23}, {24}}).validate(grid, p));
  EXPECT_THROW(Assignment({{23}, {25}}).validate(grid, p), ValidationError);
  EXPECT_THROW(Assignment({{23}, {}, {24}}).validate(grid, p), ValidationError);
}

TEST(SystemPower, SingleIdleChannelCircuitFloor) {
  RadioParams p;
  Assignment a(2);
  a.add(0, 23);
  PowerAllocation alloc;
  alloc.entries.push_back({0, 23, 0.0, 0.0});
  const auto b = system_power(a, alloc, p, 6);
  EXPECT_NEAR(b.fixed_analog, 327.7, 1e-9);
  EXPECT_NEAR(b.converter, 152.4, 1e-9);
  EXPECT_EQ(b.amplifier, 0.0);
  EXPECT_NEAR(b.total, 480.1, 1e-9);
}

TEST(SystemPower, NothingActiveCostsNothing) {
  const auto b = system_power(Assignment(2), PowerAllocation{}, RadioParams{}, 6);
  EXPECT_EQ(b.total, 0.0);
}

TEST(SystemPower, TwoFrontEndsHandArithmetic) {
  // Spans 6 and 12 MHz, 10 mW total transmit power.
  Assignment a({{23}, {26, 27}});
  PowerAllocation alloc;
  alloc.entries = {{0, 23, 4.0, 0}, {1, 26, 3.5, 0}, {1, 27, 2.5, 0}};
  const auto b = system_power(a, alloc, RadioParams{}, 6);
  EXPECT_NEAR(b.amplifier, 106.7, 1e-9);
  EXPECT_NEAR(b.fixed_analog, 655.4, 1e-9);
  EXPECT_NEAR(b.converter, 457.2, 1e-9);
  EXPECT_NEAR(b.total, 1219.3, 1e-9);
}

TEST(SystemPower, RejectsPowerOnUnownedChannel) {
  Assignment a({{23}, {}});
  PowerAllocation alloc;
  alloc.entries = {{1, 23, 1.0, 0}};
  EXPECT_THROW(system_power(a, alloc, RadioParams{}, 6), ValidationError);
  alloc.entries = {{0, 24, 1.0, 0}};
  EXPECT_THROW(system_power(a, alloc, RadioParams{}, 6), ValidationError);
  alloc.entries = {{0, 24, 0.0, 0}};
  EXPECT_NO_THROW(system_power(a, alloc, RadioParams{}, 6));
}

TEST(SystemPower, AdditiveAcrossFrontEndsAndComponentsSum) {
  std::mt19937_64 rng(3);
  RadioParams p;
  p.num_front_ends = 3;
  std::uniform_real_distribution<double> power(0, 50);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::vector<int>> sets(3);
    PowerAllocation alloc;
    for (int idx = 20; idx < 35; ++idx) {
      const int fe = std::uniform_int_distribution<int>(-1, 2)(rng);
      if (fe < 0) continue;
      sets[static_cast<std::size_t>(fe)].push_back(idx);
      alloc.entries.push_back({fe, idx, power(rng), 0});
    }
    const Assignment whole(sets);
    const auto total = system_power(whole, alloc, p, kWidth);

    double sum = 0;
    for (int fe = 0; fe < 3; ++fe) {
      std::vector<std::vector<int>> only(3);
      only[static_cast<std::size_t>(fe)] = sets[static_cast<std::size_t>(fe)];
      PowerAllocation part;
      for (const auto& e : alloc.entries) {
        if (e.front_end == fe) part.entries.push_back(e);
      }
      sum += system_power(Assignment(only), part, p, kWidth).total;
    }
    EXPECT_NEAR(sum, total.total, 1e-9 * total.total);
    EXPECT_GE(total.amplifier, 0);
    EXPECT_GE(total.fixed_analog, 0);
    EXPECT_GE(total.converter, 0);
    EXPECT_NEAR(total.amplifier + total.fixed_analog + total.converter, total.total,
                1e-9 * total.total);

    // Adding an empty front end changes nothing.
    auto padded = sets;
    padded.emplace_back();
    EXPECT_DOUBLE_EQ(system_power(Assignment(padded), alloc, p, kWidth).total, total.total);
  }
}

}  // namespace
}  // namespace ncsched
