#pragma once

#include <cstdint>

#include "ncsched/model.hpp"

namespace ncsched {

struct ExactOptions {
  /// Upper bound on (I+1)^M channel-to-front-end maps for exact_bruteforce.
  double max_maps = 2e6;
  /// Upper bound on M for exact_gapcut, which visits all 2^M subsets.
  int max_gapcut_channels = 24;
};

/// Global optimum by enumerating every map channel -> {unused, FE 1..I}.
///
/// Front ends are interchangeable, so maps are generated in canonical form
/// (a front end is opened only after all lower-numbered ones), which visits
/// each multiset of channel sets once. Transmit power depends only on the
/// union of used channels and is cached per subset. Ties prefer fewer active
/// front ends, then smaller total span, then the lexicographically smaller
/// assignment.
///
/// Throws BudgetError when (I+1)^M exceeds `options.max_maps`.
SolutionReport exact_bruteforce(const ChannelGrid& grid, const RadioParams& params,
                                double demand_mbps, const ExactOptions& options = {});

/// Global optimum by enumerating channel subsets and splitting each at its
/// widest index gaps.
///
/// For a fixed subset the transmit power is fixed, and splitting the sorted
/// channels at a gap of d grid slots saves 2 (alpha2 + beta2) (d - 1) W of
/// converter power at the cost of one more front end's fixed analog power.
/// The best split therefore takes up to I - 1 of the widest gaps, keeping
/// only those with a positive net saving.
///
/// Throws BudgetError when M exceeds `options.max_gapcut_channels`.
SolutionReport exact_gapcut(const ChannelGrid& grid, const RadioParams& params,
                            double demand_mbps, const ExactOptions& options = {});

/// Best split of one channel subset across at most `params.num_front_ends`
/// front ends, as used by exact_gapcut. `indices` must be sorted.
Assignment split_at_gaps(std::span<const int> indices, const RadioParams& params,
                         double width_mhz);

}  // namespace ncsched
