#pragma once

#include <cstddef>
#include <vector>

#include "ncsched/model.hpp"

namespace ncsched {

/// Best candidate of one greedy iteration.
struct TrialRecord {
  int channel = 0;
  int front_end = 0;
  double trial_power_mw = 0;
  bool accepted = false;
};

struct GreedyTrace {
  double seed_power_mw = 0;  // incumbent after placing the strongest channel
  std::vector<TrialRecord> trials;
  std::size_t iterations = 0;  // accepted additions, seed included
  std::size_t candidate_evaluations = 0;
  double equal_flow_total_mw = 0;  // incumbent when the loop exits
};

struct GreedyResult {
  SolutionReport report;
  GreedyTrace trace;
};

/// System power of `current` with channel `index` added to `front_end`,
/// evaluated with an even split of the demand across all assigned channels.
/// `current` is not modified.
double evaluate_candidate(const ChannelGrid& grid, const RadioParams& params,
                          const Assignment& current, int index, int front_end,
                          double demand_mbps);

/// Equal-flow system power of an assignment (the quantity the greedy loop
/// compares against its incumbent).
double equal_flow_system_power(const ChannelGrid& grid, const RadioParams& params,
                               const Assignment& assignment, double demand_mbps);

/// Greedy channel/front-end scheduler.
///
/// Starts with the strongest channel on the first front end, then repeatedly
/// adds the single (channel, front end) pair that minimizes equal-flow system
/// power, stopping once the best addition would exceed the incumbent. Ties
/// prefer the lower channel index, then an already active front end, then the
/// lower front-end number. The final allocation water-fills the chosen
/// channels.
GreedyResult greedy_solve(const ChannelGrid& grid, const RadioParams& params,
                          double demand_mbps);

}  // namespace ncsched
