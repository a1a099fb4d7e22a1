#include "ncsched/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>

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

bool nearly_equal(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return false;
  return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

double elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Maximal blocks of consecutive grid numbers, as [first, last] positions.
std::vector<std::pair<std::size_t, std::size_t>> maximal_blocks(const ChannelGrid& grid) {
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (k > 0 && grid[k].index == grid[k - 1].index + 1) {
      blocks.back().second = k;
    } else {
      blocks.emplace_back(k, k);
    }
  }
  return blocks;
}

struct RunChoice {
  double span = 0;
  Assignment assignment;
};

// Shrinks each chosen block to the water-fill support it contains, then
// spends spare front ends on the widest internal gaps (smaller span first,
// fewer front ends second).
RunChoice trim_to_support(const ChannelGrid& grid, const RadioParams& params,
                          const std::vector<int>& support) {
  std::vector<std::vector<int>> runs;
  for (std::size_t k = 0; k < support.size(); ++k) {
    if (k > 0 && support[k] == support[k - 1] + 1) {
      runs.back().push_back(support[k]);
    } else {
      runs.push_back({support[k]});
    }
  }
  // Adjacent support pieces inside one grid block may share a front end;
  // merge them back greedily, giving up the narrowest gaps first.
  struct Gap {
    std::size_t after;
    int slots;
  };
  std::vector<Gap> gaps;
  for (std::size_t k = 0; k + 1 < runs.size(); ++k) {
    const int from = runs[k].back();
    const int to = runs[k + 1].front();
    bool same_block = true;
    for (int idx = from + 1; idx < to; ++idx) {
      if (!grid.contains(idx)) {
        same_block = false;
        break;
      }
    }
    if (same_block) gaps.push_back({k, to - from});
  }
  const std::size_t allowed = static_cast<std::size_t>(params.num_front_ends);
  std::stable_sort(gaps.begin(), gaps.end(),
                   [](const Gap& a, const Gap& b) { return a.slots < b.slots; });
  std::vector<bool> merge_after(runs.size(), false);
  std::size_t pieces = runs.size();
  for (const Gap& g : gaps) {
    if (pieces <= allowed) break;
    merge_after[g.after] = true;
    --pieces;
  }

  std::vector<std::vector<int>> sets;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    if (k == 0 || !merge_after[k - 1]) {
      sets.emplace_back();
    } else {
      // The run keeps the unpowered channels between merged pieces.
      for (int idx = sets.back().back() + 1; idx < runs[k].front(); ++idx) sets.back().push_back(idx);
    }
    sets.back().insert(sets.back().end(), runs[k].begin(), runs[k].end());
  }
  sets.resize(std::max<std::size_t>(sets.size(), allowed));

  RunChoice choice;
  choice.assignment = Assignment(std::move(sets));
  choice.span = choice.assignment.total_span_mhz(grid.width_mhz());
  return choice;
}

}  // namespace

std::vector<ContiguousRun> contiguous_runs(const ChannelGrid& grid) {
  std::vector<ContiguousRun> runs;
  for (const auto& [lo, hi] : maximal_blocks(grid)) {
    for (std::size_t a = lo; a <= hi; ++a) {
      for (std::size_t b = a; b <= hi; ++b) runs.push_back({grid[a].index, grid[b].index});
    }
  }
  return runs;
}

SolutionReport mcmr_solve(const ChannelGrid& grid, const RadioParams& params,
                          double demand_mbps) {
  check_inputs(grid, params, demand_mbps);
  const auto start = std::chrono::steady_clock::now();

  // Widening a run never raises the water-filled transmit power, so the
  // minimum over all run choices is reached by some choice of whole blocks.
  // Any choice reaching it must cover that choice's water-fill support, so the
  // tie-break only needs the support trimmed back into runs.
  const auto blocks = maximal_blocks(grid);
  const std::size_t pick =
      std::min(blocks.size(), static_cast<std::size_t>(params.num_front_ends));

  double best_transmit = std::numeric_limits<double>::infinity();
  std::vector<std::vector<int>> best_supports;
  std::size_t evaluated = 0;
  std::vector<std::size_t> chosen;
  std::vector<ChannelGain> gains;

  auto evaluate = [&]() {
    gains.clear();
    for (std::size_t b : chosen) {
      for (std::size_t k = blocks[b].first; k <= blocks[b].second; ++k) {
        gains.push_back({grid[k].index, grid[k].gain});
      }
    }
    ++evaluated;
    WaterFillResult wf;
    try {
      wf = water_fill(gains, demand_mbps, grid.width_mhz(), params.n0, params.big_a);
    } catch (const InfeasibleError&) {
      return;
    }
    if (nearly_equal(wf.total_power, best_transmit)) {
      best_supports.push_back(std::move(wf.active_set));
    } else if (wf.total_power < best_transmit) {
      best_transmit = wf.total_power;
      best_supports.assign(1, std::move(wf.active_set));
    }
  };
  auto combine = [&](auto&& self, std::size_t from) -> void {
    if (chosen.size() == pick) {
      evaluate();
      return;
    }
    for (std::size_t b = from; b + (pick - chosen.size()) <= blocks.size(); ++b) {
      chosen.push_back(b);
      self(self, b + 1);
      chosen.pop_back();
    }
  };
  combine(combine, 0);

  if (best_supports.empty()) {
    throw InfeasibleError(
        fmt::format("no contiguous run choice meets {} Mbps under the power cap", demand_mbps),
        demand_mbps);
  }

  std::optional<RunChoice> best;
  for (const auto& support : best_supports) {
    RunChoice c = trim_to_support(grid, params, support);
    if (!best) {
      best = std::move(c);
      continue;
    }
    const int ca = c.assignment.num_active();
    const int ba = best->assignment.num_active();
    const bool take =
        !nearly_equal(c.span, best->span)
            ? c.span < best->span
            : (ca != ba ? ca < ba : c.assignment.sets() < best->assignment.sets());
    if (take) best = std::move(c);
  }

  SolveMeta meta;
  meta.algorithm = "mcmr";
  meta.iterations = 1;
  meta.candidate_evaluations = evaluated;
  auto report = build_report(grid, params, demand_mbps, std::move(best->assignment), meta);
  report.meta.wall_time_s = elapsed_since(start);
  return report;
}

SolutionReport ncofdm_solve(const ChannelGrid& grid, const RadioParams& params,
                            double demand_mbps) {
  check_inputs(grid, params, demand_mbps);
  const auto start = std::chrono::steady_clock::now();
  const auto gains = gains_of(grid);
  const auto wf = water_fill(gains, demand_mbps, grid.width_mhz(), params.n0, params.big_a);

  Assignment assignment(params.num_front_ends);
  for (int index : wf.active_set) assignment.add(0, index);

  SolveMeta meta;
  meta.algorithm = "ncofdm";
  meta.iterations = 1;
  meta.candidate_evaluations = 1;
  auto report = build_report(grid, params, demand_mbps, std::move(assignment), meta);
  report.meta.wall_time_s = elapsed_since(start);
  return report;
}

}  // namespace ncsched
