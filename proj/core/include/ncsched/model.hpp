#pragma once

// Domain types and the power/rate model for a multi front end point-to-point
// link. Units throughout: power in mW, bandwidth and span in MHz, rate in
// Mbps, noise density in mW/MHz, sampling rate in MSPS.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncsched {

/// Thrown when inputs violate a documented precondition or invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when the rate demand cannot be met under the per-channel power cap.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, double shortfall_mbps)
      : std::runtime_error(what), shortfall_mbps_(shortfall_mbps) {}

  double shortfall_mbps() const noexcept { return shortfall_mbps_; }

 private:
  double shortfall_mbps_;
};

/// Thrown by the exhaustive solvers when the instance exceeds their budget.
class BudgetError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Thermal noise at -174 dBm/Hz expressed in mW/MHz.
inline constexpr double kThermalNoiseMwPerMhz = 3.981071705534969e-12;

struct Channel {
  int index = 0;               // grid number, e.g. TV channel 23
  double center_freq_mhz = 0;  // informational, used for gain synthesis
  double gain = 0;             // linear power gain, > 0
};

/// Ordered set of available channels sharing a common width.
class ChannelGrid {
 public:
  ChannelGrid() = default;

  /// Channels must have strictly increasing indices and finite positive gains.
  ChannelGrid(std::vector<Channel> channels, double width_mhz);

  std::span<const Channel> channels() const noexcept { return channels_; }
  std::size_t size() const noexcept { return channels_.size(); }
  bool empty() const noexcept { return channels_.empty(); }
  double width_mhz() const noexcept { return width_mhz_; }

  const Channel& operator[](std::size_t pos) const { return channels_[pos]; }

  /// Position of `index` in the grid, or npos.
  std::size_t position_of(int index) const noexcept;
  bool contains(int index) const noexcept { return position_of(index) != npos; }
  const Channel& at_index(int index) const;

  /// Position of the strongest channel; ties go to the lowest index.
  std::size_t strongest() const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<Channel> channels_;
  double width_mhz_ = 0;
};

struct RadioParams {
  double alpha1 = 45.4;  // transmitter analog blocks, mW
  double alpha2 = 7.2;   // DAC slope, mW/MSPS
  double beta1 = 282.3;  // receiver analog blocks, mW
  double beta2 = 5.5;    // ADC slope, mW/MSPS
  double k_pa = 10.67;   // amplifier factor PAPR/efficiency
  double n0 = kThermalNoiseMwPerMhz;
  int num_front_ends = 2;
  double big_a = 1e6;  // per-channel power cap, mW

  /// Fixed analog power charged per active front end.
  double fixed_per_front_end() const noexcept { return alpha1 + beta1; }
  /// Converter power per MHz of span (sampling at twice the span).
  double converter_per_mhz() const noexcept { return 2.0 * (alpha2 + beta2); }

  void validate() const;
};

/// Disjoint per-front-end channel sets, each kept sorted by index.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(int num_front_ends);
  explicit Assignment(std::vector<std::vector<int>> sets);

  int num_front_ends() const noexcept { return static_cast<int>(sets_.size()); }
  const std::vector<int>& set(int front_end) const { return sets_.at(front_end); }
  const std::vector<std::vector<int>>& sets() const noexcept { return sets_; }

  /// Adds `index` to a front end. Throws if the channel is already assigned.
  void add(int front_end, int index);

  bool is_assigned(int index) const noexcept;
  int owner_of(int index) const noexcept;  // -1 when unassigned
  bool active(int front_end) const { return !sets_.at(front_end).empty(); }
  int num_active() const noexcept;
  std::size_t num_channels() const noexcept;

  double span_mhz(int front_end, double width_mhz) const;
  double total_span_mhz(double width_mhz) const;

  /// All assigned channel indices, sorted.
  std::vector<int> channel_union() const;

  /// Checks disjointness, membership in `grid` and the front-end count.
  void validate(const ChannelGrid& grid, const RadioParams& params) const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<std::vector<int>> sets_;
};

struct ChannelPower {
  int front_end = 0;
  int index = 0;
  double power_mw = 0;
  double rate_mbps = 0;
};

struct PowerAllocation {
  std::vector<ChannelPower> entries;

  double total_power() const noexcept;
  double total_rate() const noexcept;
};

struct PowerBreakdown {
  double amplifier = 0;     // k_pa * sum p
  double fixed_analog = 0;  // (alpha1 + beta1) per active front end
  double converter = 0;     // 2 (alpha2 + beta2) q_i summed
  double total = 0;
};

struct SolveMeta {
  std::string algorithm;
  std::size_t iterations = 0;
  std::size_t candidate_evaluations = 0;
  double wall_time_s = 0;
};

struct SolutionReport {
  double demand_mbps = 0;
  Assignment assignment;
  PowerAllocation allocation;
  PowerBreakdown breakdown;
  SolveMeta meta;

  double achieved_rate() const noexcept { return allocation.total_rate(); }
};

/// Width of the band between the outer edges of the channels in `indices`.
/// Zero for an empty set.
double spectrum_span(std::span<const int> indices, double width_mhz);

/// Shannon rate of one channel: W log2(1 + p g / (n0 W)).
double channel_rate(double power_mw, double gain, double width_mhz, double n0);

/// Power needed for `rate_mbps` on one channel; inverse of channel_rate.
double inverse_rate(double rate_mbps, double gain, double width_mhz, double n0);

/// Circuit-only part of the objective for an assignment.
PowerBreakdown circuit_power(const Assignment& assignment, const RadioParams& params,
                             double width_mhz);

/// Full objective. Throws ValidationError if any positive power sits on a
/// channel its front end does not own.
PowerBreakdown system_power(const Assignment& assignment, const PowerAllocation& allocation,
                            const RadioParams& params, double width_mhz);

}  // namespace ncsched
