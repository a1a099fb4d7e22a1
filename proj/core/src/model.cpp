#include "ncsched/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace ncsched {

ChannelGrid::ChannelGrid(std::vector<Channel> channels, double width_mhz)
    : channels_(std::move(channels)), width_mhz_(width_mhz) {
  if (!(width_mhz_ > 0) || !std::isfinite(width_mhz_)) {
    throw ValidationError(fmt::format("channel width must be positive, got {}", width_mhz_));
  }
  for (std::size_t k = 0; k < channels_.size(); ++k) {
    const Channel& c = channels_[k];
    if (!(c.gain > 0) || !std::isfinite(c.gain)) {
      throw ValidationError(
          fmt::format("channel {} has invalid gain {}; gains must be finite and > 0", c.index,
                      c.gain));
    }
    if (k > 0 && channels_[k - 1].index >= c.index) {
      throw ValidationError(fmt::format("channel indices must be strictly increasing ({} then {})",
                                        channels_[k - 1].index, c.index));
    }
  }
}

std::size_t ChannelGrid::position_of(int index) const noexcept {
  auto it = std::lower_bound(channels_.begin(), channels_.end(), index,
                             [](const Channel& c, int i) { return c.index < i; });
  if (it == channels_.end() || it->index != index) return npos;
  return static_cast<std::size_t>(it - channels_.begin());
}

const Channel& ChannelGrid::at_index(int index) const {
  std::size_t pos = position_of(index);
  if (pos == npos) throw ValidationError(fmt::format("channel {} is not in the grid", index));
  return channels_[pos];
}

std::size_t ChannelGrid::strongest() const {
  if (channels_.empty()) throw ValidationError("channel grid is empty");
  std::size_t best = 0;
  for (std::size_t k = 1; k < channels_.size(); ++k) {
    if (channels_[k].gain > channels_[best].gain) best = k;
  }
  return best;
}

void RadioParams::validate() const {
  auto nonneg = [](double v, const char* name) {
    if (!(v >= 0) || !std::isfinite(v)) {
      throw ValidationError(fmt::format("{} must be finite and nonnegative, got {}", name, v));
    }
  };
  nonneg(alpha1, "alpha1");
  nonneg(alpha2, "alpha2");
  nonneg(beta1, "beta1");
  nonneg(beta2, "beta2");
  nonneg(n0, "n0");
  if (!(k_pa >= 1) || !std::isfinite(k_pa)) {
    throw ValidationError(fmt::format("k_pa must be >= 1, got {}", k_pa));
  }
  if (!(n0 > 0)) throw ValidationError("n0 must be positive");
  if (num_front_ends < 1) {
    throw ValidationError(fmt::format("need at least one front end, got {}", num_front_ends));
  }
  if (!(big_a > 0)) throw ValidationError(fmt::format("big_a must be positive, got {}", big_a));
}

Assignment::Assignment(int num_front_ends) {
  if (num_front_ends < 1) throw ValidationError("assignment needs at least one front end");
  sets_.resize(static_cast<std::size_t>(num_front_ends));
}

Assignment::Assignment(std::vector<std::vector<int>> sets) : sets_(std::move(sets)) {
  if (sets_.empty()) throw ValidationError("assignment needs at least one front end");
  std::vector<int> seen;
  for (auto& s : sets_) {
    std::sort(s.begin(), s.end());
    seen.insert(seen.end(), s.begin(), s.end());
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw ValidationError("channel assigned to more than one front end");
  }
}

void Assignment::add(int front_end, int index) {
  if (front_end < 0 || front_end >= num_front_ends()) {
    throw ValidationError(fmt::format("front end {} out of range", front_end));
  }
  if (is_assigned(index)) {
    throw ValidationError(fmt::format("channel {} is already assigned", index));
  }
  auto& s = sets_[static_cast<std::size_t>(front_end)];
  s.insert(std::upper_bound(s.begin(), s.end(), index), index);
}

bool Assignment::is_assigned(int index) const noexcept { return owner_of(index) >= 0; }

int Assignment::owner_of(int index) const noexcept {
  for (std::size_t i = 0; i < sets_.size(); ++i) {
    if (std::binary_search(sets_[i].begin(), sets_[i].end(), index)) return static_cast<int>(i);
  }
  return -1;
}

int Assignment::num_active() const noexcept {
  return static_cast<int>(
      std::count_if(sets_.begin(), sets_.end(), [](const auto& s) { return !s.empty(); }));
}

std::size_t Assignment::num_channels() const noexcept {
  std::size_t n = 0;
  for (const auto& s : sets_) n += s.size();
  return n;
}

double Assignment::span_mhz(int front_end, double width_mhz) const {
  return spectrum_span(sets_.at(static_cast<std::size_t>(front_end)), width_mhz);
}

double Assignment::total_span_mhz(double width_mhz) const {
  double total = 0;
  for (const auto& s : sets_) total += spectrum_span(s, width_mhz);
  return total;
}

std::vector<int> Assignment::channel_union() const {
  std::vector<int> all;
  for (const auto& s : sets_) all.insert(all.end(), s.begin(), s.end());
  std::sort(all.begin(), all.end());
  return all;
}

void Assignment::validate(const ChannelGrid& grid, const RadioParams& params) const {
  if (num_front_ends() > params.num_front_ends) {
    throw ValidationError(fmt::format("assignment uses {} front ends but only {} exist",
                                      num_front_ends(), params.num_front_ends));
  }
  for (const auto& s : sets_) {
    for (int index : s) {
      if (!grid.contains(index)) {
        throw ValidationError(fmt::format("assigned channel {} is not in the grid", index));
      }
    }
  }
  auto all = channel_union();
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
    throw ValidationError("channel assigned to more than one front end");
  }
}

double PowerAllocation::total_power() const noexcept {
  double sum = 0;
  for (const auto& e : entries) sum += e.power_mw;
  return sum;
}

double PowerAllocation::total_rate() const noexcept {
  double sum = 0;
  for (const auto& e : entries) sum += e.rate_mbps;
  return sum;
}

double spectrum_span(std::span<const int> indices, double width_mhz) {
  if (indices.empty()) return 0.0;
  auto [lo, hi] = std::minmax_element(indices.begin(), indices.end());
  return width_mhz * static_cast<double>(*hi - *lo + 1);
}

double channel_rate(double power_mw, double gain, double width_mhz, double n0) {
  const double snr = power_mw * gain / (n0 * width_mhz);
  return width_mhz * std::log1p(snr) / std::numbers::ln2;
}

double inverse_rate(double rate_mbps, double gain, double width_mhz, double n0) {
  return std::expm1(rate_mbps * std::numbers::ln2 / width_mhz) * n0 * width_mhz / gain;
}

PowerBreakdown circuit_power(const Assignment& assignment, const RadioParams& params,
                             double width_mhz) {
  PowerBreakdown b;
  for (int i = 0; i < assignment.num_front_ends(); ++i) {
    if (!assignment.active(i)) continue;
    b.fixed_analog += params.fixed_per_front_end();
    b.converter += params.converter_per_mhz() * assignment.span_mhz(i, width_mhz);
  }
  b.total = b.fixed_analog + b.converter;
  return b;
}

PowerBreakdown system_power(const Assignment& assignment, const PowerAllocation& allocation,
                            const RadioParams& params, double width_mhz) {
  double sum_p = 0;
  for (const auto& e : allocation.entries) {
    if (e.power_mw < 0) {
      throw ValidationError(fmt::format("negative power on channel {}", e.index));
    }
    if (e.power_mw > 0) {
      if (e.front_end < 0 || e.front_end >= assignment.num_front_ends() ||
          !std::binary_search(assignment.set(e.front_end).begin(),
                              assignment.set(e.front_end).end(), e.index)) {
        throw ValidationError(fmt::format(
            "positive power on channel {} which front end {} does not own", e.index,
            e.front_end + 1));
      }
    }
    sum_p += e.power_mw;
  }
  PowerBreakdown b = circuit_power(assignment, params, width_mhz);
  b.amplifier = params.k_pa * sum_p;
  b.total = b.amplifier + b.fixed_analog + b.converter;
  return b;
}

}  // namespace ncsched
