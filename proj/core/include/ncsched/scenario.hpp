#pragma once

// Experiment layer: channel files, link-gain synthesis, configuration and
// demand sweeps.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ncsched/exact.hpp"
#include "ncsched/model.hpp"

namespace ncsched {

/// Malformed input text; carries the 1-based line number when known.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : ValidationError(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Shipped default seed for gain synthesis.
inline constexpr std::uint64_t kDefaultSeed = 163;

/// Name of the generator behind gain synthesis, written into output metadata.
inline constexpr std::string_view kGeneratorName = "mt19937_64";

struct ChannelRecord {
  int index = 0;
  double center_freq_mhz = 0;
  std::optional<double> gain_db;
};

/// Rows of a channel file, sorted by index.
struct ChannelPlan {
  std::vector<ChannelRecord> records;

  bool has_gains() const noexcept;
  /// Requires every record to carry a gain.
  ChannelGrid to_grid(double width_mhz) const;
};

/// Parses `index,center_freq_mhz[,gain_db]` CSV with a header row. Lines
/// starting with '#' are skipped. Duplicate indices and empty files are
/// rejected.
ChannelPlan parse_channels(std::istream& in);
ChannelPlan load_channels(const std::filesystem::path& path);

/// Writes the plan as CSV; the gain column is emitted when every row has one.
void write_channels(std::ostream& out, const ChannelPlan& plan,
                    const std::vector<std::string>& metadata = {});

struct LinkBudget {
  double distance_m = 500;
  double pathloss_exponent = 3;
  double variation_db = 15;
  std::uint64_t seed = kDefaultSeed;

  void validate() const;
};

/// Free-space loss in dB over one metre at `freq_mhz`.
double free_space_loss_1m_db(double freq_mhz);

/// Fills every record's gain_db with
///   -[FSPL(1 m, f) + 10 n log10(d / 1 m)] - U,  U ~ uniform[0, variation_db],
/// drawing U per channel in index order from mt19937_64 seeded with `seed`.
ChannelPlan synthesize_gains(const ChannelPlan& plan, const LinkBudget& link);

/// Uses the file's gains when present, otherwise synthesizes them.
ChannelGrid make_grid(const ChannelPlan& plan, double width_mhz, const LinkBudget& link);

enum class Algorithm { greedy, mcmr, ncofdm, exact, gapcut };

std::string_view to_string(Algorithm a) noexcept;
Algorithm parse_algorithm(std::string_view name);
std::vector<Algorithm> parse_algorithm_list(std::string_view csv);

SolutionReport solve_with(Algorithm algorithm, const ChannelGrid& grid,
                          const RadioParams& params, double demand_mbps,
                          const ExactOptions& exact_options = {});

/// Parses `start:step:stop` (inclusive of stop when aligned) or a comma list.
std::vector<double> parse_demands(std::string_view text);

struct ScenarioConfig {
  std::filesystem::path channels;
  double width_mhz = 6;
  RadioParams params;
  LinkBudget link;
  std::vector<double> demands;
  std::vector<Algorithm> algorithms{Algorithm::greedy, Algorithm::mcmr, Algorithm::ncofdm};

  void validate() const;
};

/// Flat `key = value` document; '#' starts a comment. Unknown keys are
/// rejected. A relative `channels` path is resolved against `base_dir`.
ScenarioConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
ScenarioConfig load_config(const std::filesystem::path& path);

struct SweepRow {
  static constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

  double demand_mbps = 0;
  Algorithm algorithm = Algorithm::greedy;
  // Numeric fields stay NaN for rows that failed.
  double total_mw = kNaN;
  double amplifier_mw = kNaN;
  double fixed_analog_mw = kNaN;
  double converter_mw = kNaN;
  int active_front_ends = 0;
  std::vector<int> channels;
  double span_mhz = kNaN;
  double achieved_rate_mbps = kNaN;
  std::string error;  // empty when the cell solved

  bool ok() const noexcept { return error.empty(); }
};

struct SweepResult {
  std::vector<SweepRow> rows;  // demand-major, algorithm-minor
  std::vector<std::string> metadata;
};

/// One row per (demand, algorithm). Solver failures are recorded in the row
/// and the sweep continues. Cells run on up to `jobs` threads; row order and
/// contents do not depend on `jobs`.
SweepResult run_sweep(const ScenarioConfig& config, const ChannelGrid& grid, int jobs = 1);
SweepResult run_sweep(const ScenarioConfig& config, int jobs = 1);

inline constexpr std::string_view kSweepHeader =
    "demand_mbps,algorithm,total_mw,amplifier_mw,fixed_analog_mw,converter_mw,active_fes,"
    "channels,span_mhz";

void write_sweep_csv(std::ostream& out, const SweepResult& result);
SweepResult parse_sweep_csv(std::istream& in);

}  // namespace ncsched
