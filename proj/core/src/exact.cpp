#include "ncsched/exact.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include <fmt/format.h>

#include "ncsched/waterfill.hpp"

namespace ncsched {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

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

struct Candidate {
  double total = kInf;
  int active = 0;
  double span = 0;
  Assignment assignment;
};

// Orders candidates by total, then front-end count, then span, then sets.
bool better(const Candidate& a, const Candidate& b) {
  if (!nearly_equal(a.total, b.total)) return a.total < b.total;
  if (a.active != b.active) return a.active < b.active;
  if (!nearly_equal(a.span, b.span)) return a.span < b.span;
  return a.assignment.sets() < b.assignment.sets();
}

// k_pa times the optimal transmit power of a channel subset; +inf when the
// subset cannot meet the demand under the cap.
class TransmitCache {
 public:
  TransmitCache(const ChannelGrid& grid, const RadioParams& params, double demand_mbps)
      : grid_(grid), params_(params), demand_(demand_mbps),
        values_(std::size_t{1} << grid.size(), std::numeric_limits<double>::quiet_NaN()) {}

  double operator()(std::uint64_t mask) {
    double& v = values_[mask];
    if (std::isnan(v)) v = compute(grid_, params_, demand_, mask);
    return v;
  }

  static double compute(const ChannelGrid& grid, const RadioParams& params, double demand,
                        std::uint64_t mask) {
    std::vector<ChannelGain> gains;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (mask >> k & 1U) gains.push_back({grid[k].index, grid[k].gain});
    }
    try {
      return params.k_pa *
             water_fill(gains, demand, grid.width_mhz(), params.n0, params.big_a).total_power;
    } catch (const InfeasibleError&) {
      return kInf;
    }
  }

 private:
  const ChannelGrid& grid_;
  const RadioParams& params_;
  double demand_;
  std::vector<double> values_;
};

class MapEnumerator {
 public:
  MapEnumerator(const ChannelGrid& grid, const RadioParams& params, double demand_mbps)
      : grid_(grid), params_(params), transmit_(grid, params, demand_mbps),
        max_open_(static_cast<int>(std::min<std::size_t>(
            static_cast<std::size_t>(params.num_front_ends), grid.size()))),
        label_(grid.size(), -1), first_(static_cast<std::size_t>(max_open_), -1),
        last_(static_cast<std::size_t>(max_open_), -1) {}

  std::optional<Candidate> run() {
    visit(0, 0, 0);
    return best_;
  }

  std::size_t maps_visited() const noexcept { return visited_; }

 private:
  void visit(std::size_t pos, int open, std::uint64_t mask) {
    if (pos == grid_.size()) {
      if (mask != 0) score(open, mask);
      return;
    }
    visit(pos + 1, open, mask);  // unused
    const int index = grid_[pos].index;
    const int limit = std::min(open + 1, max_open_);
    for (int fe = 0; fe < limit; ++fe) {
      const auto f = static_cast<std::size_t>(fe);
      const int saved_first = first_[f];
      const int saved_last = last_[f];
      if (first_[f] < 0) first_[f] = index;
      last_[f] = index;
      label_[pos] = fe;
      visit(pos + 1, std::max(open, fe + 1), mask | (std::uint64_t{1} << pos));
      label_[pos] = -1;
      first_[f] = saved_first;
      last_[f] = saved_last;
    }
  }

  void score(int open, std::uint64_t mask) {
    ++visited_;
    const double width = grid_.width_mhz();
    double span = 0;
    for (int fe = 0; fe < open; ++fe) {
      const auto f = static_cast<std::size_t>(fe);
      span += width * static_cast<double>(last_[f] - first_[f] + 1);
    }
    const double circuit = open * params_.fixed_per_front_end() + params_.converter_per_mhz() * span;
    const double transmit = transmit_(mask);
    if (!std::isfinite(transmit)) return;

    Candidate c;
    c.total = transmit + circuit;
    c.active = open;
    c.span = span;
    if (best_ && c.total > best_->total && !nearly_equal(c.total, best_->total)) return;
    c.assignment = current_assignment();
    if (!best_ || better(c, *best_)) best_ = std::move(c);
  }

  Assignment current_assignment() const {
    Assignment a(params_.num_front_ends);
    for (std::size_t pos = 0; pos < grid_.size(); ++pos) {
      if (label_[pos] >= 0) a.add(label_[pos], grid_[pos].index);
    }
    return a;
  }

  const ChannelGrid& grid_;
  const RadioParams& params_;
  TransmitCache transmit_;
  int max_open_;
  std::vector<int> label_;
  std::vector<int> first_;
  std::vector<int> last_;
  std::optional<Candidate> best_;
  std::size_t visited_ = 0;
};

[[noreturn]] void throw_all_infeasible(double demand_mbps) {
  throw InfeasibleError(
      fmt::format("no channel subset meets {} Mbps under the power cap", demand_mbps),
      demand_mbps);
}

}  // namespace

SolutionReport exact_bruteforce(const ChannelGrid& grid, const RadioParams& params,
                                double demand_mbps, const ExactOptions& options) {
  check_inputs(grid, params, demand_mbps);
  const double maps = std::pow(static_cast<double>(params.num_front_ends) + 1.0,
                               static_cast<double>(grid.size()));
  if (maps > options.max_maps || grid.size() >= 63) {
    throw BudgetError(fmt::format(
        "exact brute force would enumerate {:.3g} channel maps (budget {:.3g}); "
        "use the gap-cut oracle (exact_gapcut) instead",
        maps, options.max_maps));
  }
  const auto start = std::chrono::steady_clock::now();
  MapEnumerator enumerator(grid, params, demand_mbps);
  auto best = enumerator.run();
  if (!best) throw_all_infeasible(demand_mbps);

  SolveMeta meta;
  meta.algorithm = "exact";
  meta.iterations = 1;
  meta.candidate_evaluations = enumerator.maps_visited();
  auto report = build_report(grid, params, demand_mbps, std::move(best->assignment), meta);
  report.meta.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

Assignment split_at_gaps(std::span<const int> indices, const RadioParams& params,
                         double width_mhz) {
  Assignment a(params.num_front_ends);
  if (indices.empty()) return a;

  struct Gap {
    std::size_t after;  // cut between indices[after] and indices[after + 1]
    int slots;
  };
  std::vector<Gap> gaps;
  for (std::size_t k = 0; k + 1 < indices.size(); ++k) {
    gaps.push_back({k, indices[k + 1] - indices[k]});
  }
  std::stable_sort(gaps.begin(), gaps.end(),
                   [](const Gap& x, const Gap& y) { return x.slots > y.slots; });

  std::vector<std::size_t> cuts;
  for (const Gap& g : gaps) {
    if (static_cast<int>(cuts.size()) + 1 >= params.num_front_ends) break;
    const double saving = params.converter_per_mhz() * width_mhz * (g.slots - 1);
    if (saving - params.fixed_per_front_end() <= 0) break;
    cuts.push_back(g.after);
  }
  std::sort(cuts.begin(), cuts.end());

  int fe = 0;
  std::size_t next_cut = 0;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    a.add(fe, indices[k]);
    if (next_cut < cuts.size() && cuts[next_cut] == k) {
      ++fe;
      ++next_cut;
    }
  }
  return a;
}

SolutionReport exact_gapcut(const ChannelGrid& grid, const RadioParams& params,
                            double demand_mbps, const ExactOptions& options) {
  check_inputs(grid, params, demand_mbps);
  if (static_cast<int>(grid.size()) > options.max_gapcut_channels) {
    throw BudgetError(fmt::format("gap-cut oracle would enumerate 2^{} subsets (limit 2^{})",
                                  grid.size(), options.max_gapcut_channels));
  }
  const auto start = std::chrono::steady_clock::now();
  const double width = grid.width_mhz();
  const std::uint64_t subsets = std::uint64_t{1} << grid.size();

  std::optional<Candidate> best;
  std::vector<int> indices;
  for (std::uint64_t mask = 1; mask < subsets; ++mask) {
    const double transmit = TransmitCache::compute(grid, params, demand_mbps, mask);
    if (!std::isfinite(transmit)) continue;
    indices.clear();
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (mask >> k & 1U) indices.push_back(grid[k].index);
    }
    Candidate c;
    c.assignment = split_at_gaps(indices, params, width);
    const PowerBreakdown circuit = circuit_power(c.assignment, params, width);
    c.total = transmit + circuit.total;
    c.active = c.assignment.num_active();
    c.span = c.assignment.total_span_mhz(width);
    if (!best || better(c, *best)) best = std::move(c);
  }
  if (!best) throw_all_infeasible(demand_mbps);

  SolveMeta meta;
  meta.algorithm = "gapcut";
  meta.iterations = 1;
  meta.candidate_evaluations = subsets - 1;
  auto report = build_report(grid, params, demand_mbps, std::move(best->assignment), meta);
  report.meta.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace ncsched
