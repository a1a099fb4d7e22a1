#include "ncsched/greedy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <fmt/format.h>

#include "ncsched/waterfill.hpp"

namespace ncsched {

namespace {

void check_inputs(const ChannelGrid& grid, const RadioParams& params, double demand_mbps) {
  params.validate();
  if (grid.empty()) throw ValidationError("channel grid is empty");
  if (!(demand_mbps > 0) || !std::isfinite(demand_mbps)) {
    throw ValidationError(fmt::format("demand must be positive, got {}", demand_mbps));
  }
}

}  // namespace

double equal_flow_system_power(const ChannelGrid& grid, const RadioParams& params,
                               const Assignment& assignment, double demand_mbps) {
  const std::size_t count = assignment.num_channels();
  if (count == 0) throw ValidationError("assignment has no channels");
  const double flow = demand_mbps / static_cast<double>(count);
  const double width = grid.width_mhz();
  double transmit = 0;
  for (const auto& set : assignment.sets()) {
    for (int index : set) {
      transmit += inverse_rate(flow, grid.at_index(index).gain, width, params.n0);
    }
  }
  return params.k_pa * transmit + circuit_power(assignment, params, width).total;
}

double evaluate_candidate(const ChannelGrid& grid, const RadioParams& params,
                          const Assignment& current, int index, int front_end,
                          double demand_mbps) {
  if (front_end < 0 || front_end >= current.num_front_ends()) {
    throw ValidationError(fmt::format("front end {} out of range", front_end));
  }
  if (current.is_assigned(index)) {
    throw ValidationError(fmt::format("channel {} is already assigned", index));
  }
  const double width = grid.width_mhz();
  const double flow = demand_mbps / static_cast<double>(current.num_channels() + 1);

  double transmit = inverse_rate(flow, grid.at_index(index).gain, width, params.n0);
  double circuit = 0;
  for (int i = 0; i < current.num_front_ends(); ++i) {
    const auto& set = current.set(i);
    for (int n : set) transmit += inverse_rate(flow, grid.at_index(n).gain, width, params.n0);

    if (i == front_end) {
      const int lo = set.empty() ? index : std::min(set.front(), index);
      const int hi = set.empty() ? index : std::max(set.back(), index);
      circuit += params.fixed_per_front_end() +
                 params.converter_per_mhz() * width * static_cast<double>(hi - lo + 1);
    } else if (!set.empty()) {
      circuit += params.fixed_per_front_end() +
                 params.converter_per_mhz() * spectrum_span(set, width);
    }
  }
  return params.k_pa * transmit + circuit;
}

GreedyResult greedy_solve(const ChannelGrid& grid, const RadioParams& params,
                          double demand_mbps) {
  check_inputs(grid, params, demand_mbps);
  const auto start = std::chrono::steady_clock::now();

  GreedyResult result;
  GreedyTrace& trace = result.trace;
  Assignment assignment(params.num_front_ends);

  const Channel& seed = grid[grid.strongest()];
  assignment.add(0, seed.index);
  double incumbent = equal_flow_system_power(grid, params, assignment, demand_mbps);
  trace.seed_power_mw = incumbent;
  trace.iterations = 1;

  while (assignment.num_channels() < grid.size()) {
    bool found = false;
    TrialRecord best;
    for (const Channel& ch : grid.channels()) {
      if (assignment.is_assigned(ch.index)) continue;
      for (int i = 0; i < params.num_front_ends; ++i) {
        const double p = evaluate_candidate(grid, params, assignment, ch.index, i, demand_mbps);
        ++trace.candidate_evaluations;
        bool take = !found || p < best.trial_power_mw;
        if (found && p == best.trial_power_mw && ch.index == best.channel) {
          take = assignment.active(i) && !assignment.active(best.front_end);
        }
        if (take) {
          best = {ch.index, i, p, false};
          found = true;
        }
      }
    }
    best.accepted = best.trial_power_mw <= incumbent;
    trace.trials.push_back(best);
    if (!best.accepted) break;
    incumbent = best.trial_power_mw;
    assignment.add(best.front_end, best.channel);
    ++trace.iterations;
  }
  trace.equal_flow_total_mw = incumbent;

  SolveMeta meta;
  meta.algorithm = "greedy";
  meta.iterations = trace.iterations;
  meta.candidate_evaluations = trace.candidate_evaluations;
  result.report = build_report(grid, params, demand_mbps, std::move(assignment), std::move(meta));
  result.report.meta.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace ncsched
