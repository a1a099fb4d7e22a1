#include "cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "ncsched/scenario.hpp"

namespace ncsched::cli {

namespace {

// Human-readable numbers use four significant digits.
std::string sig4(double v) { return fmt::format("{:.4g}", v); }

struct Inputs {
  ScenarioConfig config;
  ChannelGrid grid;
  bool gains_from_file = false;
};

ScenarioConfig resolve_config(const std::string& config_path) {
  std::string path = config_path;
  if (path.empty()) {
    if (const char* env = std::getenv(kConfigEnv)) path = env;
  }
  if (path.empty()) return ScenarioConfig{};
  return load_config(path);
}

Inputs load_inputs(const std::string& channels_path, const std::string& config_path) {
  Inputs in;
  in.config = resolve_config(config_path);
  if (!channels_path.empty()) in.config.channels = channels_path;
  if (in.config.channels.empty()) {
    throw ValidationError("no channel file given (use --channels or set 'channels' in the config)");
  }
  const auto plan = load_channels(in.config.channels);
  in.gains_from_file = plan.has_gains();
  in.grid = make_grid(plan, in.config.width_mhz, in.config.link);
  return in;
}

void print_report(std::ostream& out, const SolutionReport& r, double width_mhz) {
  out << "algorithm: " << r.meta.algorithm << '\n';
  out << "demand_mbps: " << sig4(r.demand_mbps) << '\n';
  out << "achieved_rate_mbps: " << sig4(r.achieved_rate()) << '\n';
  out << "active_front_ends: " << r.assignment.num_active() << '\n';
  out << "front_ends:\n";
  for (int i = 0; i < r.assignment.num_front_ends(); ++i) {
    out << "  - front_end: " << i + 1 << '\n';
    out << "    active: " << (r.assignment.active(i) ? "true" : "false") << '\n';
    out << "    span_mhz: " << sig4(r.assignment.span_mhz(i, width_mhz)) << '\n';
    out << "    channels:";
    if (!r.assignment.active(i)) {
      out << " []\n";
      continue;
    }
    out << '\n';
    for (const auto& e : r.allocation.entries) {
      if (e.front_end != i) continue;
      out << fmt::format("      - {{index: {}, power_mw: {}, rate_mbps: {}}}\n", e.index,
                         sig4(e.power_mw), sig4(e.rate_mbps));
    }
  }
  out << "breakdown_mw:\n";
  out << "  amplifier: " << sig4(r.breakdown.amplifier) << '\n';
  out << "  fixed_analog: " << sig4(r.breakdown.fixed_analog) << '\n';
  out << "  converter: " << sig4(r.breakdown.converter) << '\n';
  out << "  total: " << sig4(r.breakdown.total) << '\n';
  out << "iterations: " << r.meta.iterations << '\n';
  out << "candidate_evaluations: " << r.meta.candidate_evaluations << '\n';
}

void print_sweep_summary(std::ostream& out, const ScenarioConfig& config,
                         const SweepResult& result) {
  out << "rows: " << result.rows.size() << '\n';
  std::map<Algorithm, std::vector<const SweepRow*>> by_algo;
  for (const auto& row : result.rows) by_algo[row.algorithm].push_back(&row);

  for (Algorithm a : config.algorithms) {
    const auto& rows = by_algo[a];
    const SweepRow* lo = nullptr;
    const SweepRow* hi = nullptr;
    std::size_t failed = 0;
    for (const auto* row : rows) {
      if (!row->ok()) {
        ++failed;
        continue;
      }
      if (!lo || row->total_mw < lo->total_mw) lo = row;
      if (!hi || row->total_mw > hi->total_mw) hi = row;
    }
    out << to_string(a) << ":";
    if (lo) {
      out << fmt::format(" min {} mW at {} Mbps, max {} mW at {} Mbps", sig4(lo->total_mw),
                         sig4(lo->demand_mbps), sig4(hi->total_mw), sig4(hi->demand_mbps));
    }
    if (failed) out << fmt::format(" ({} failed cells)", failed);
    out << '\n';
  }

  // Demands at which the cheaper of two algorithms changes.
  for (std::size_t x = 0; x < config.algorithms.size(); ++x) {
    for (std::size_t y = x + 1; y < config.algorithms.size(); ++y) {
      const auto& rx = by_algo[config.algorithms[x]];
      const auto& ry = by_algo[config.algorithms[y]];
      std::vector<std::string> flips;
      int prev_sign = 0;
      for (std::size_t k = 0; k < rx.size() && k < ry.size(); ++k) {
        if (!rx[k]->ok() || !ry[k]->ok()) continue;
        const double d = rx[k]->total_mw - ry[k]->total_mw;
        const int sign = d < 0 ? -1 : (d > 0 ? 1 : 0);
        if (sign != 0 && prev_sign != 0 && sign != prev_sign) {
          flips.push_back(sig4(rx[k]->demand_mbps));
        }
        if (sign != 0) prev_sign = sign;
      }
      if (!flips.empty()) {
        std::string joined;
        for (const auto& f : flips) joined += (joined.empty() ? "" : ",") + f;
        out << fmt::format("crossover {}/{}: {} Mbps\n", to_string(config.algorithms[x]),
                           to_string(config.algorithms[y]), joined);
      }
    }
  }
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError(fmt::format("cannot write '{}'", path));
  f << contents;
  if (!f) throw ValidationError(fmt::format("failed writing '{}'", path));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimum system power channel scheduling for multi front end links"};
  app.name("ncsched");
  app.require_subcommand(1);

  std::string channels;
  std::string config;
  double demand = 0;
  std::string algorithm = "greedy";
  std::string demands = "5:5:100";
  std::string algorithms = "greedy,mcmr,ncofdm";
  std::string out_path;
  int jobs = 1;

  auto* solve = app.add_subcommand("solve", "Solve one demand with one algorithm");
  solve->add_option("--channels", channels, "Channel CSV file");
  solve->add_option("--config", config, "Scenario config file");
  solve->add_option("--demand", demand, "Rate demand in Mbps")->required();
  solve->add_option("--algorithm", algorithm, "greedy|mcmr|ncofdm|exact|gapcut");

  auto* compare = app.add_subcommand("compare", "Solve one demand with several algorithms");
  compare->add_option("--channels", channels, "Channel CSV file");
  compare->add_option("--config", config, "Scenario config file");
  compare->add_option("--demand", demand, "Rate demand in Mbps")->required();
  compare->add_option("--algorithms", algorithms, "Comma-separated algorithm list");

  auto* sweep = app.add_subcommand("sweep", "Sweep demands and write a CSV table");
  sweep->add_option("--channels", channels, "Channel CSV file");
  sweep->add_option("--config", config, "Scenario config file");
  sweep->add_option("--demands", demands, "start:step:stop or comma list, in Mbps");
  sweep->add_option("--algorithms", algorithms, "Comma-separated algorithm list");
  sweep->add_option("--out", out_path, "Output CSV path")->required();
  sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  LinkBudget link;
  auto* gen = app.add_subcommand("gen", "Synthesize link gains into a channel file");
  gen->add_option("--channels", channels, "Input channel CSV file")->required();
  gen->add_option("--distance", link.distance_m, "Link distance in metres");
  gen->add_option("--exponent", link.pathloss_exponent, "Path-loss exponent");
  gen->add_option("--variation", link.variation_db, "Random attenuation range in dB");
  gen->add_option("--seed", link.seed, "Generator seed");
  gen->add_option("--out", out_path, "Output CSV path")->required();

  std::string sweep_path;
  std::string check_algorithm = "greedy";
  auto* check = app.add_subcommand("check", "Check that sweep totals never fall as demand grows");
  check->add_option("--sweep", sweep_path, "Sweep CSV produced by 'sweep'")->required();
  check->add_option("--algorithm", check_algorithm, "Algorithm whose rows are checked");

  std::vector<std::string> argv_storage{"ncsched"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInvalid;
  }

  try {
    if (solve->parsed()) {
      const auto a = parse_algorithm(algorithm);
      if (!(demand > 0)) throw ValidationError(fmt::format("demand must be positive, got {}", demand));
      const auto in = load_inputs(channels, config);
      print_report(out, solve_with(a, in.grid, in.config.params, demand), in.grid.width_mhz());
    } else if (compare->parsed()) {
      const auto list = parse_algorithm_list(algorithms);
      if (!(demand > 0)) throw ValidationError(fmt::format("demand must be positive, got {}", demand));
      const auto in = load_inputs(channels, config);
      out << fmt::format("{:<8} {:>10} {:>10} {:>10} {:>10} {:>4}  {}\n", "algo", "total_mw",
                         "amp_mw", "fixed_mw", "conv_mw", "fes", "channels");
      for (Algorithm a : list) {
        try {
          const auto r = solve_with(a, in.grid, in.config.params, demand);
          std::string sets;
          for (const auto& s : r.assignment.sets()) {
            if (s.empty()) continue;
            if (!sets.empty()) sets += ' ';
            sets += '{';
            for (std::size_t k = 0; k < s.size(); ++k) sets += (k ? " " : "") + std::to_string(s[k]);
            sets += '}';
          }
          out << fmt::format("{:<8} {:>10} {:>10} {:>10} {:>10} {:>4}  {}\n", to_string(a),
                             sig4(r.breakdown.total), sig4(r.breakdown.amplifier),
                             sig4(r.breakdown.fixed_analog), sig4(r.breakdown.converter),
                             r.assignment.num_active(), sets);
        } catch (const std::exception& e) {
          err << to_string(a) << ": " << e.what() << '\n';
          out << fmt::format("{:<8} {:>10}\n", to_string(a), "failed");
        }
      }
    } else if (sweep->parsed()) {
      auto in = load_inputs(channels, config);
      in.config.demands = parse_demands(demands);
      in.config.algorithms = parse_algorithm_list(algorithms);
      auto result = run_sweep(in.config, in.grid, jobs);
      result.metadata.insert(result.metadata.begin(),
                             fmt::format("gains={}", in.gains_from_file ? "file" : "synthesized"));
      std::ostringstream csv;
      write_sweep_csv(csv, result);
      write_file(out_path, csv.str());
      print_sweep_summary(out, in.config, result);
    } else if (gen->parsed()) {
      link.validate();
      const auto plan = synthesize_gains(load_channels(channels), link);
      std::vector<std::string> meta{fmt::format(
          "gains: generator={} variation=uniform[0,variation_db] distance_m={} "
          "pathloss_exponent={} variation_db={}",
          kGeneratorName, link.distance_m, link.pathloss_exponent, link.variation_db)};
      // The seed only matters when there is something to draw.
      if (link.variation_db > 0) meta.back() += fmt::format(" seed={}", link.seed);
      std::ostringstream csv;
      write_channels(csv, plan, meta);
      write_file(out_path, csv.str());
    } else if (check->parsed()) {
      std::ifstream f(sweep_path);
      if (!f) throw ValidationError(fmt::format("cannot open sweep file '{}'", sweep_path));
      const auto wanted = parse_algorithm(check_algorithm);
      const auto result = parse_sweep_csv(f);
      const SweepRow* prev = nullptr;
      std::size_t violations = 0;
      std::size_t checked = 0;
      for (const auto& row : result.rows) {
        if (row.algorithm != wanted || !row.ok()) continue;
        ++checked;
        if (prev && row.demand_mbps > prev->demand_mbps && row.total_mw < prev->total_mw) {
          ++violations;
          out << fmt::format("decrease: {} mW at {} Mbps after {} mW at {} Mbps\n",
                             sig4(row.total_mw), sig4(row.demand_mbps), sig4(prev->total_mw),
                             sig4(prev->demand_mbps));
        }
        prev = &row;
      }
      out << fmt::format("{}: {} rows checked, {} decreases\n", to_string(wanted), checked,
                         violations);
      return violations == 0 ? kExitOk : kExitCheckFailed;
    }
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const BudgetError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitOk;
}

}  // namespace ncsched::cli
