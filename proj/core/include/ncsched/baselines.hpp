#pragma once

#include <vector>

#include "ncsched/model.hpp"

namespace ncsched {

/// A run of consecutive grid numbers, all present in the grid.
struct ContiguousRun {
  int first = 0;
  int last = 0;

  friend bool operator==(const ContiguousRun&, const ContiguousRun&) = default;
};

/// Every contiguous run in `grid` (each sub-interval of each maximal block).
std::vector<ContiguousRun> contiguous_runs(const ChannelGrid& grid);

/// Multi-channel multi-radio baseline: up to I pairwise-disjoint contiguous
/// runs, one per front end, chosen to minimize transmit power. Ties prefer
/// smaller total span, then fewer front ends. Circuit power is charged
/// afterwards on the chosen runs.
SolutionReport mcmr_solve(const ChannelGrid& grid, const RadioParams& params,
                          double demand_mbps);

/// Single front end NC-OFDM baseline: water-fills across the whole grid and
/// spans the extreme channels of the water-fill support.
SolutionReport ncofdm_solve(const ChannelGrid& grid, const RadioParams& params,
                            double demand_mbps);

}  // namespace ncsched
