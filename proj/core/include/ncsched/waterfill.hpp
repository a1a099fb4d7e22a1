#pragma once

#include <span>
#include <vector>

#include "ncsched/model.hpp"

namespace ncsched {

struct ChannelGain {
  int index = 0;
  double gain = 0;
};

struct ChannelLoad {
  int index = 0;
  double power_mw = 0;
  double rate_mbps = 0;
};

struct WaterFillResult {
  std::vector<ChannelLoad> loads;  // same order as the input gains
  double water_level = 0;          // mu, in mW, over the uncapped channels
  std::vector<int> active_set;     // indices with p > 0, ascending
  double total_power = 0;
  double achieved_rate = 0;
  bool cap_binding = false;

  double power_of(int index) const;
};

/// Minimum total transmit power meeting `demand_mbps` over the given
/// channels, each capped at `cap_mw`.
///
/// Uncapped, the optimum is the classic water-filling solution: channels are
/// ranked by their noise-to-gain level c = n0 W / g and the k cheapest share
/// the level mu = (2^(r/W) * prod c)^(1/k), with k the largest count for
/// which mu exceeds the k-th level. Channels whose power would exceed the cap
/// are clamped and the remaining demand is refilled over the rest until no
/// channel exceeds the cap.
///
/// Throws InfeasibleError if the demand cannot be met with every channel at
/// the cap, and ValidationError for empty input or non-positive gains.
WaterFillResult water_fill(std::span<const ChannelGain> gains, double demand_mbps,
                           double width_mhz, double n0, double cap_mw);

/// Per-channel powers when the demand is split evenly across the channels.
std::vector<double> equal_flow_power(std::span<const ChannelGain> gains, double demand_mbps,
                                     double width_mhz, double n0);

/// Gains of the given channel indices, looked up in `grid`.
std::vector<ChannelGain> gains_of(const ChannelGrid& grid, std::span<const int> indices);
std::vector<ChannelGain> gains_of(const ChannelGrid& grid);

/// Water-fills the union of `assignment`'s channels and packages the result
/// with the full power breakdown. Powers are attributed to the front end that
/// owns each channel.
SolutionReport build_report(const ChannelGrid& grid, const RadioParams& params,
                            double demand_mbps, Assignment assignment, SolveMeta meta);

}  // namespace ncsched
