#include "ncsched/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "ncsched/baselines.hpp"
#include "ncsched/greedy.hpp"

namespace ncsched {

namespace {

std::string_view trim(std::string_view s) {
  const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r' && c != '\n'; };
  auto b = std::find_if(s.begin(), s.end(), not_space);
  auto e = std::find_if(s.rbegin(), s.rend(), not_space).base();
  return b < e ? std::string_view(&*b, static_cast<std::size_t>(e - b)) : std::string_view{};
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t from = 0;
  while (true) {
    const auto at = s.find(sep, from);
    out.push_back(trim(s.substr(from, at == std::string_view::npos ? at : at - from)));
    if (at == std::string_view::npos) break;
    from = at + 1;
  }
  return out;
}

template <typename T>
std::optional<T> parse_number(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) return std::nullopt;
  return value;
}

template <typename T>
T require_number(std::string_view text, std::string_view what, std::size_t line) {
  auto v = parse_number<T>(text);
  if (!v) {
    throw ParseError(fmt::format("line {}: cannot parse {} from '{}'", line, what, text), line);
  }
  return *v;
}

std::string join_indices(const std::vector<int>& indices) {
  std::string out;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (k) out += ';';
    out += std::to_string(indices[k]);
  }
  return out;
}

}  // namespace

bool ChannelPlan::has_gains() const noexcept {
  return !records.empty() &&
         std::all_of(records.begin(), records.end(), [](const auto& r) { return r.gain_db; });
}

ChannelGrid ChannelPlan::to_grid(double width_mhz) const {
  if (records.empty()) throw ValidationError("channel plan is empty");
  std::vector<Channel> channels;
  channels.reserve(records.size());
  for (const auto& r : records) {
    if (!r.gain_db) throw ValidationError(fmt::format("channel {} has no gain", r.index));
    channels.push_back({r.index, r.center_freq_mhz, std::pow(10.0, *r.gain_db / 10.0)});
  }
  return ChannelGrid(std::move(channels), width_mhz);
}

ChannelPlan parse_channels(std::istream& in) {
  ChannelPlan plan;
  std::string raw;
  std::size_t line = 0;
  bool header_seen = false;
  bool has_gain_column = false;
  while (std::getline(in, raw)) {
    ++line;
    const auto text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    const auto fields = split(text, ',');
    if (!header_seen) {
      header_seen = true;
      if (fields.size() < 2 || fields.size() > 3 || fields[0] != "index" ||
          fields[1] != "center_freq_mhz" || (fields.size() == 3 && fields[2] != "gain_db")) {
        throw ParseError(
            fmt::format("line {}: expected header 'index,center_freq_mhz[,gain_db]'", line), line);
      }
      has_gain_column = fields.size() == 3;
      continue;
    }
    if (fields.size() != (has_gain_column ? 3U : 2U)) {
      throw ParseError(fmt::format("line {}: expected {} fields, got {}", line,
                                   has_gain_column ? 3 : 2, fields.size()),
                       line);
    }
    ChannelRecord r;
    r.index = require_number<int>(fields[0], "channel index", line);
    r.center_freq_mhz = require_number<double>(fields[1], "center frequency", line);
    if (!(r.center_freq_mhz > 0) || !std::isfinite(r.center_freq_mhz)) {
      throw ParseError(fmt::format("line {}: center frequency must be positive", line), line);
    }
    if (has_gain_column && !fields[2].empty()) {
      r.gain_db = require_number<double>(fields[2], "gain_db", line);
      if (!std::isfinite(*r.gain_db)) {
        throw ParseError(fmt::format("line {}: gain_db must be finite", line), line);
      }
    }
    plan.records.push_back(r);
  }
  if (plan.records.empty()) throw ValidationError("channel file has no channels");
  std::stable_sort(plan.records.begin(), plan.records.end(),
                   [](const auto& a, const auto& b) { return a.index < b.index; });
  for (std::size_t k = 1; k < plan.records.size(); ++k) {
    if (plan.records[k].index == plan.records[k - 1].index) {
      throw ValidationError(
          fmt::format("duplicate channel index {} in channel file", plan.records[k].index));
    }
  }
  return plan;
}

ChannelPlan load_channels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("cannot open channel file '{}'", path.string()));
  return parse_channels(in);
}

void write_channels(std::ostream& out, const ChannelPlan& plan,
                    const std::vector<std::string>& metadata) {
  for (const auto& m : metadata) out << "# " << m << '\n';
  const bool gains = plan.has_gains();
  out << (gains ? "index,center_freq_mhz,gain_db\n" : "index,center_freq_mhz\n");
  for (const auto& r : plan.records) {
    out << fmt::format("{},{}", r.index, r.center_freq_mhz);
    if (gains) out << fmt::format(",{}", *r.gain_db);
    out << '\n';
  }
}

void LinkBudget::validate() const {
  if (!(distance_m > 0)) throw ValidationError("distance must be positive");
  if (!(pathloss_exponent > 0)) throw ValidationError("path-loss exponent must be positive");
  if (!(variation_db >= 0)) throw ValidationError("variation_db must be >= 0");
}

double free_space_loss_1m_db(double freq_mhz) {
  constexpr double kSpeedOfLight = 299792458.0;
  return 20.0 * std::log10(4.0 * std::numbers::pi * freq_mhz * 1e6 / kSpeedOfLight);
}

ChannelPlan synthesize_gains(const ChannelPlan& plan, const LinkBudget& link) {
  link.validate();
  std::mt19937_64 engine(link.seed);
  ChannelPlan out = plan;
  const double distance_loss = 10.0 * link.pathloss_exponent * std::log10(link.distance_m);
  for (auto& r : out.records) {
    // 53 high bits -> [0, 1); fixed here so outputs do not depend on the
    // standard library's distribution implementation.
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    r.gain_db = -(free_space_loss_1m_db(r.center_freq_mhz) + distance_loss) -
                u * link.variation_db;
  }
  return out;
}

ChannelGrid make_grid(const ChannelPlan& plan, double width_mhz, const LinkBudget& link) {
  if (plan.has_gains()) return plan.to_grid(width_mhz);
  return synthesize_gains(plan, link).to_grid(width_mhz);
}

std::string_view to_string(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::greedy: return "greedy";
    case Algorithm::mcmr: return "mcmr";
    case Algorithm::ncofdm: return "ncofdm";
    case Algorithm::exact: return "exact";
    case Algorithm::gapcut: return "gapcut";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  name = trim(name);
  for (auto a : {Algorithm::greedy, Algorithm::mcmr, Algorithm::ncofdm, Algorithm::exact,
                 Algorithm::gapcut}) {
    if (name == to_string(a)) return a;
  }
  throw ValidationError(fmt::format(
      "unknown algorithm '{}' (expected greedy, mcmr, ncofdm, exact or gapcut)", name));
}

std::vector<Algorithm> parse_algorithm_list(std::string_view csv) {
  std::vector<Algorithm> out;
  if (trim(csv).empty()) return out;
  for (auto part : split(csv, ',')) out.push_back(parse_algorithm(part));
  return out;
}

SolutionReport solve_with(Algorithm algorithm, const ChannelGrid& grid,
                          const RadioParams& params, double demand_mbps,
                          const ExactOptions& exact_options) {
  switch (algorithm) {
    case Algorithm::greedy: return greedy_solve(grid, params, demand_mbps).report;
    case Algorithm::mcmr: return mcmr_solve(grid, params, demand_mbps);
    case Algorithm::ncofdm: return ncofdm_solve(grid, params, demand_mbps);
    case Algorithm::exact: return exact_bruteforce(grid, params, demand_mbps, exact_options);
    case Algorithm::gapcut: return exact_gapcut(grid, params, demand_mbps, exact_options);
  }
  throw ValidationError("unknown algorithm");
}

std::vector<double> parse_demands(std::string_view text) {
  text = trim(text);
  std::vector<double> out;
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ValidationError("demand range must be start:step:stop");
    const auto start = parse_number<double>(parts[0]);
    const auto step = parse_number<double>(parts[1]);
    const auto stop = parse_number<double>(parts[2]);
    if (!start || !step || !stop) {
      throw ValidationError(fmt::format("cannot parse demand range '{}'", text));
    }
    if (!(*step > 0)) throw ValidationError("demand step must be positive");
    if (*stop < *start) throw ValidationError("demand range stop is below start");
    // Index-based so that 5:5:100 yields exactly 20 values.
    const auto count = static_cast<std::size_t>(std::floor((*stop - *start) / *step + 1e-9)) + 1;
    for (std::size_t k = 0; k < count; ++k) out.push_back(*start + static_cast<double>(k) * *step);
  } else {
    for (auto part : split(text, ',')) {
      auto v = parse_number<double>(part);
      if (!v) throw ValidationError(fmt::format("cannot parse demand '{}'", part));
      out.push_back(*v);
    }
  }
  for (double d : out) {
    if (!(d > 0) || !std::isfinite(d)) {
      throw ValidationError(fmt::format("demands must be strictly positive, got {}", d));
    }
  }
  return out;
}

void ScenarioConfig::validate() const {
  if (!(width_mhz > 0)) throw ValidationError("width_mhz must be positive");
  params.validate();
  link.validate();
  for (double d : demands) {
    if (!(d > 0) || !std::isfinite(d)) {
      throw ValidationError(fmt::format("demands must be strictly positive, got {}", d));
    }
  }
}

ScenarioConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  ScenarioConfig cfg;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto text = trim(std::string_view(raw).substr(0, raw.find('#')));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(fmt::format("line {}: expected 'key = value'", line), line);
    }
    const auto key = trim(text.substr(0, eq));
    const auto value = trim(text.substr(eq + 1));
    auto num = [&](std::string_view what) { return require_number<double>(value, what, line); };

    try {
      if (key == "channels") {
        std::filesystem::path p{std::string(value)};
        cfg.channels = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
      } else if (key == "width_mhz") {
        cfg.width_mhz = num(key);
      } else if (key == "alpha1") {
        cfg.params.alpha1 = num(key);
      } else if (key == "alpha2") {
        cfg.params.alpha2 = num(key);
      } else if (key == "beta1") {
        cfg.params.beta1 = num(key);
      } else if (key == "beta2") {
        cfg.params.beta2 = num(key);
      } else if (key == "k_pa") {
        cfg.params.k_pa = num(key);
      } else if (key == "n0_mw_per_mhz") {
        cfg.params.n0 = num(key);
      } else if (key == "front_ends") {
        cfg.params.num_front_ends = require_number<int>(value, key, line);
      } else if (key == "big_a_mw") {
        cfg.params.big_a = num(key);
      } else if (key == "distance_m") {
        cfg.link.distance_m = num(key);
      } else if (key == "pathloss_exponent") {
        cfg.link.pathloss_exponent = num(key);
      } else if (key == "variation_db") {
        cfg.link.variation_db = num(key);
      } else if (key == "seed") {
        cfg.link.seed = require_number<std::uint64_t>(value, key, line);
      } else if (key == "demands") {
        cfg.demands = parse_demands(value);
      } else if (key == "algorithms") {
        cfg.algorithms = parse_algorithm_list(value);
      } else {
        throw ParseError(fmt::format("line {}: unknown key '{}'", line, key), line);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ParseError(fmt::format("line {}: {}", line, e.what()), line);
    }
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("cannot open config file '{}'", path.string()));
  return parse_config(in, path.parent_path());
}

SweepResult run_sweep(const ScenarioConfig& config, const ChannelGrid& grid, int jobs) {
  config.validate();
  SweepResult result;
  result.metadata.push_back(fmt::format(
      "generator={} variation=uniform[0,variation_db] seed={} distance_m={} "
      "pathloss_exponent={} variation_db={}",
      kGeneratorName, config.link.seed, config.link.distance_m, config.link.pathloss_exponent,
      config.link.variation_db));
  result.metadata.push_back(fmt::format(
      "width_mhz={} alpha1={} alpha2={} beta1={} beta2={} k_pa={} n0_mw_per_mhz={} "
      "front_ends={} big_a_mw={}",
      grid.width_mhz(), config.params.alpha1, config.params.alpha2, config.params.beta1,
      config.params.beta2, config.params.k_pa, config.params.n0, config.params.num_front_ends,
      config.params.big_a));

  const std::size_t per_demand = config.algorithms.size();
  const std::size_t cells = config.demands.size() * per_demand;
  result.rows.resize(cells);

  auto run_cell = [&](std::size_t cell) {
    SweepRow& row = result.rows[cell];
    row.demand_mbps = config.demands[cell / per_demand];
    row.algorithm = config.algorithms[cell % per_demand];
    try {
      const auto report = solve_with(row.algorithm, grid, config.params, row.demand_mbps);
      row.total_mw = report.breakdown.total;
      row.amplifier_mw = report.breakdown.amplifier;
      row.fixed_analog_mw = report.breakdown.fixed_analog;
      row.converter_mw = report.breakdown.converter;
      row.active_front_ends = report.assignment.num_active();
      row.channels = report.assignment.channel_union();
      row.span_mhz = report.assignment.total_span_mhz(grid.width_mhz());
      row.achieved_rate_mbps = report.achieved_rate();
    } catch (const InfeasibleError& e) {
      row.error = fmt::format("infeasible: {}", e.what());
    } catch (const BudgetError& e) {
      row.error = fmt::format("over-budget: {}", e.what());
    } catch (const std::exception& e) {
      row.error = fmt::format("error: {}", e.what());
    }
  };

  const std::size_t workers =
      std::min<std::size_t>(cells, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t c = 0; c < cells; ++c) run_cell(c);
    return result;
  }
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < cells; c = next++) run_cell(c);
      });
    }
  }
  return result;
}

SweepResult run_sweep(const ScenarioConfig& config, int jobs) {
  const auto plan = load_channels(config.channels);
  const auto grid = make_grid(plan, config.width_mhz, config.link);
  auto result = run_sweep(config, grid, jobs);
  result.metadata.insert(result.metadata.begin(),
                         fmt::format("gains={}", plan.has_gains() ? "file" : "synthesized"));
  return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  for (const auto& m : result.metadata) out << "# " << m << '\n';
  out << kSweepHeader << '\n';
  for (const auto& r : result.rows) {
    if (r.ok()) {
      out << fmt::format("{},{},{},{},{},{},{},{},{}\n", r.demand_mbps, to_string(r.algorithm),
                         r.total_mw, r.amplifier_mw, r.fixed_analog_mw, r.converter_mw,
                         r.active_front_ends, join_indices(r.channels), r.span_mhz);
    } else {
      const auto kind = r.error.substr(0, r.error.find(':'));
      out << fmt::format("{},{},nan,nan,nan,nan,0,{},nan\n", r.demand_mbps,
                         to_string(r.algorithm), kind);
    }
  }
}

SweepResult parse_sweep_csv(std::istream& in) {
  SweepResult result;
  std::string raw;
  std::size_t line = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line;
    const auto text = trim(raw);
    if (text.empty()) continue;
    if (text.front() == '#') {
      result.metadata.emplace_back(trim(text.substr(1)));
      continue;
    }
    if (!header_seen) {
      if (text != kSweepHeader) {
        throw ParseError(fmt::format("line {}: unexpected sweep header", line), line);
      }
      header_seen = true;
      continue;
    }
    const auto f = split(text, ',');
    if (f.size() != 9) {
      throw ParseError(fmt::format("line {}: expected 9 fields, got {}", line, f.size()), line);
    }
    SweepRow r;
    r.demand_mbps = require_number<double>(f[0], "demand", line);
    r.algorithm = parse_algorithm(f[1]);
    r.active_front_ends = require_number<int>(f[6], "active_fes", line);
    if (f[2] == "nan") {
      r.error = std::string(f[7]);
    } else {
      r.total_mw = require_number<double>(f[2], "total_mw", line);
      r.amplifier_mw = require_number<double>(f[3], "amplifier_mw", line);
      r.fixed_analog_mw = require_number<double>(f[4], "fixed_analog_mw", line);
      r.converter_mw = require_number<double>(f[5], "converter_mw", line);
      if (!f[7].empty()) {
        for (auto idx : split(f[7], ';')) r.channels.push_back(require_number<int>(idx, "channel", line));
      }
      r.span_mhz = require_number<double>(f[8], "span_mhz", line);
    }
    result.rows.push_back(std::move(r));
  }
  if (!header_seen) throw ParseError("sweep file has no header", line);
  return result;
}

}  // namespace ncsched
