#include "ncsched/waterfill.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

namespace ncsched {

namespace {

struct Level {
  std::size_t slot;  // position in the caller's input
  int index;
  double c;  // n0 W / g
};

// Uncapped closed form over `levels`, which must be sorted by c ascending.
// Writes powers into `power[slot]` and returns the water level.
double fill_sorted(std::span<const Level> levels, double demand_mbps, double width_mhz,
                   std::vector<double>& power) {
  if (demand_mbps <= 0) {
    for (const auto& l : levels) power[l.slot] = 0.0;
    return levels.front().c;
  }
  const double log_budget = demand_mbps * std::numbers::ln2 / width_mhz;
  double log_sum = 0;
  double log_mu = 0;
  std::size_t active = 0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    log_sum += std::log(levels[k].c);
    const double candidate = (log_budget + log_sum) / static_cast<double>(k + 1);
    if (candidate > std::log(levels[k].c)) {
      active = k + 1;
      log_mu = candidate;
    }
  }
  const double mu = std::exp(log_mu);
  for (std::size_t k = 0; k < levels.size(); ++k) {
    power[levels[k].slot] = k < active ? std::max(mu - levels[k].c, 0.0) : 0.0;
  }
  return mu;
}

}  // namespace

double WaterFillResult::power_of(int index) const {
  for (const auto& l : loads) {
    if (l.index == index) return l.power_mw;
  }
  return 0.0;
}

WaterFillResult water_fill(std::span<const ChannelGain> gains, double demand_mbps,
                           double width_mhz, double n0, double cap_mw) {
  if (gains.empty()) throw ValidationError("water_fill needs at least one channel");
  if (!(demand_mbps >= 0) || !std::isfinite(demand_mbps)) {
    throw ValidationError(fmt::format("demand must be finite and >= 0, got {}", demand_mbps));
  }
  std::vector<Level> levels;
  levels.reserve(gains.size());
  for (std::size_t s = 0; s < gains.size(); ++s) {
    if (!(gains[s].gain > 0) || !std::isfinite(gains[s].gain)) {
      throw ValidationError(fmt::format("channel {} has non-positive gain", gains[s].index));
    }
    levels.push_back({s, gains[s].index, n0 * width_mhz / gains[s].gain});
  }
  std::stable_sort(levels.begin(), levels.end(), [](const Level& a, const Level& b) {
    return a.c < b.c || (a.c == b.c && a.index < b.index);
  });

  std::vector<double> power(gains.size(), 0.0);
  double clamped_rate = 0;
  bool cap_binding = false;
  double mu = 0;
  // Each pass either terminates or clamps at least one more channel.
  std::vector<Level> free = levels;
  while (true) {
    if (free.empty()) {
      const double shortfall = demand_mbps - clamped_rate;
      throw InfeasibleError(
          fmt::format("demand {} Mbps exceeds capacity {} Mbps with every channel at the "
                      "{} mW cap (short by {} Mbps)",
                      demand_mbps, clamped_rate, cap_mw, shortfall),
          shortfall);
    }
    mu = fill_sorted(free, std::max(demand_mbps - clamped_rate, 0.0), width_mhz, power);
    std::vector<Level> keep;
    keep.reserve(free.size());
    for (const auto& l : free) {
      if (power[l.slot] > cap_mw) {
        power[l.slot] = cap_mw;
        clamped_rate += channel_rate(cap_mw, gains[l.slot].gain, width_mhz, n0);
        cap_binding = true;
      } else {
        keep.push_back(l);
      }
    }
    if (keep.size() == free.size()) break;
    free = std::move(keep);
    if (clamped_rate >= demand_mbps) {
      // Clamped channels alone meet demand; can only happen through rounding.
      for (const auto& l : free) power[l.slot] = 0.0;
      break;
    }
  }

  WaterFillResult result;
  result.water_level = mu;
  result.cap_binding = cap_binding;
  result.loads.reserve(gains.size());
  for (std::size_t s = 0; s < gains.size(); ++s) {
    const double r = channel_rate(power[s], gains[s].gain, width_mhz, n0);
    result.loads.push_back({gains[s].index, power[s], r});
    result.total_power += power[s];
    result.achieved_rate += r;
    if (power[s] > 0) result.active_set.push_back(gains[s].index);
  }
  std::sort(result.active_set.begin(), result.active_set.end());
  return result;
}

std::vector<double> equal_flow_power(std::span<const ChannelGain> gains, double demand_mbps,
                                     double width_mhz, double n0) {
  if (gains.empty()) throw ValidationError("equal_flow_power needs at least one channel");
  const double flow = demand_mbps / static_cast<double>(gains.size());
  std::vector<double> power;
  power.reserve(gains.size());
  for (const auto& g : gains) power.push_back(inverse_rate(flow, g.gain, width_mhz, n0));
  return power;
}

std::vector<ChannelGain> gains_of(const ChannelGrid& grid, std::span<const int> indices) {
  std::vector<ChannelGain> out;
  out.reserve(indices.size());
  for (int index : indices) out.push_back({index, grid.at_index(index).gain});
  return out;
}

std::vector<ChannelGain> gains_of(const ChannelGrid& grid) {
  std::vector<ChannelGain> out;
  out.reserve(grid.size());
  for (const auto& c : grid.channels()) out.push_back({c.index, c.gain});
  return out;
}

SolutionReport build_report(const ChannelGrid& grid, const RadioParams& params,
                            double demand_mbps, Assignment assignment, SolveMeta meta) {
  assignment.validate(grid, params);
  const auto all = assignment.channel_union();
  if (all.empty()) throw ValidationError("assignment has no channels");
  const auto gains = gains_of(grid, all);
  const auto wf = water_fill(gains, demand_mbps, grid.width_mhz(), params.n0, params.big_a);

  SolutionReport report;
  report.demand_mbps = demand_mbps;
  for (const auto& load : wf.loads) {
    report.allocation.entries.push_back(
        {assignment.owner_of(load.index), load.index, load.power_mw, load.rate_mbps});
  }
  std::sort(report.allocation.entries.begin(), report.allocation.entries.end(),
            [](const ChannelPower& a, const ChannelPower& b) {
              return a.front_end < b.front_end || (a.front_end == b.front_end && a.index < b.index);
            });
  report.breakdown = system_power(assignment, report.allocation, params, grid.width_mhz());
  report.assignment = std::move(assignment);
  report.meta = std::move(meta);
  return report;
}

}  // namespace ncsched
