// Copyright 2026 the awarekit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "awarekit/errors.hpp"
#include "awarekit/pipeline_sim.hpp"

namespace
{

namespace fs = std::filesystem;
using namespace awarekit;

enum class LogLevel { quiet, info, debug };

LogLevel log_level()
{
  const char * env = std::getenv("AWAREKIT_LOG");
  if (env == nullptr) {
    return LogLevel::info;
  }
  const std::string value(env);
  if (value == "quiet") {
    return LogLevel::quiet;
  }
  if (value == "debug") {
    return LogLevel::debug;
  }
  return LogLevel::info;
}

struct CliOptions
{
  std::string map_path;
  std::string scenario_path;
  std::string catalog_path;  // empty: built-in default catalog
  std::string mode{"aware"};
  std::string aggregation{"capped"};
  std::string out_dir{"out"};
  bool dump_grids{false};
  std::uint64_t seed{0};
};

struct Inputs
{
  MapModel map;
  ModuleRegistry registry;
  Scenario scenario;
};

Inputs load_inputs(const CliOptions & options)
{
  Inputs inputs;
  inputs.map = load_map(options.map_path);
  inputs.scenario = load_scenario(options.scenario_path);
  inputs.registry =
    options.catalog_path.empty() ? default_catalog() : ModuleRegistry::load(options.catalog_path);
  return inputs;
}

SimulationOptions simulation_options(const CliOptions & options, RunMode mode)
{
  SimulationOptions sim;
  sim.mode = mode;
  const auto aggregation = aggregation_mode_from_string(options.aggregation);
  if (!aggregation) {
    throw Error("unknown aggregation mode \"" + options.aggregation + "\"");
  }
  sim.aggregation = *aggregation;
  sim.seed = options.seed;
  return sim;
}

/// Runs one mode and writes cycles.jsonl, metrics.json, overhead.csv, and
/// optional per-frame grid dumps into out_dir.
RunResult run_and_write(const Inputs & inputs, const CliOptions & options, RunMode mode,
                        const fs::path & out_dir)
{
  fs::create_directories(out_dir);
  CycleObserver observer;
  if (options.dump_grids) {
    fs::create_directories(out_dir / "grids");
    observer = [&out_dir](const CycleTrace & trace) {
      std::ofstream grid(out_dir / "grids" / ("frame_" + std::to_string(trace.index) + ".csv"));
      write_grid_csv(grid, trace.mlam);
      std::ofstream polar(out_dir / "grids" / ("polar_" + std::to_string(trace.index) + ".csv"));
      write_polar_csv(polar, trace.polar);
    };
  }

  const RunResult result =
    run_scenario(inputs.map, inputs.registry, inputs.scenario,
                 simulation_options(options, mode), std::move(observer));

  {
    std::ofstream cycles(out_dir / "cycles.jsonl");
    for (const CycleResult & cycle : result.cycles) {
      cycles << cycle_to_json(cycle).dump() << '\n';
      if (log_level() == LogLevel::debug) {
        std::cerr << "[cycle] " << cycle_to_json(cycle).dump() << '\n';
      }
    }
  }
  {
    std::ofstream metrics(out_dir / "metrics.json");
    metrics << metrics_to_json(result.metrics, mode).dump(1) << '\n';
  }
  {
    std::ofstream overhead(out_dir / "overhead.csv");
    overhead << "cycle,overhead_ms\n";
    for (std::size_t i = 0; i < result.cycles.size(); ++i) {
      overhead << i << ',' << result.cycles[i].overhead_ms << '\n';
    }
  }
  return result;
}

void print_summary(const RunResult & result, RunMode mode)
{
  if (log_level() == LogLevel::quiet) {
    return;
  }
  std::cout << "mode: " << to_string(mode) << ", frames: " << result.metrics.frames << "\n";
  std::cout << "uptime per module:\n";
  for (const auto & [id, uptime] : result.metrics.uptime) {
    std::cout << "  " << std::left << std::setw(14) << id << std::fixed
              << std::setprecision(3) << uptime << "\n";
  }
  std::cout << "accumulated cost: " << std::setprecision(4) << result.metrics.accumulated_cost
            << " (naive reference " << result.metrics.naive_reference_cost << ", ratio "
            << result.metrics.cost_ratio << ")\n";
  std::cout << "awareness overhead: mean " << std::setprecision(3)
            << result.metrics.overhead.mean_ms << " ms, max " << result.metrics.overhead.max_ms
            << " ms per cycle\n";
  if (result.metrics.degraded_cycles > 0) {
    std::cout << "degraded cycles: " << result.metrics.degraded_cycles << "\n";
  }
  std::cout.unsetf(std::ios::fixed);
}

std::map<std::string, double> per_module_cost(const std::vector<CycleResult> & cycles)
{
  std::map<std::string, double> costs;
  for (const CycleResult & cycle : cycles) {
    for (const auto & [id, cost] : cycle.module_costs) {
      costs[id] += cost;
    }
  }
  return costs;
}

int cmd_run(const CliOptions & options)
{
  const Inputs inputs = load_inputs(options);
  const auto mode = run_mode_from_string(options.mode);
  if (!mode) {
    throw Error("unknown mode \"" + options.mode + "\"");
  }
  const RunResult result = run_and_write(inputs, options, *mode, options.out_dir);
  print_summary(result, *mode);
  return 0;
}

int cmd_compare(const CliOptions & options)
{
  const Inputs inputs = load_inputs(options);
  const fs::path out_dir(options.out_dir);
  const RunResult aware = run_and_write(inputs, options, RunMode::aware, out_dir / "aware");
  const RunResult naive = run_and_write(inputs, options, RunMode::naive, out_dir / "naive");

  const auto aware_costs = per_module_cost(aware.cycles);
  const auto naive_costs = per_module_cost(naive.cycles);

  nlohmann::json comparison;
  comparison["schema"] = 1;
  comparison["frames"] = aware.metrics.frames;
  comparison["accumulated_cost"] = {{"aware", aware.metrics.accumulated_cost},
                                    {"naive", naive.metrics.accumulated_cost}};
  const double reduction =
    naive.metrics.accumulated_cost > 0.0
      ? 100.0 * (1.0 - aware.metrics.accumulated_cost / naive.metrics.accumulated_cost)
      : 0.0;
  comparison["reduction_percent"] = reduction;
  comparison["per_module"] = nlohmann::json::object();
  for (const auto & module : inputs.registry.modules()) {
    const double aware_cost =
      aware_costs.count(module.id) != 0 ? aware_costs.at(module.id) : 0.0;
    const double naive_cost =
      naive_costs.count(module.id) != 0 ? naive_costs.at(module.id) : 0.0;
    nlohmann::json entry = {{"aware", aware_cost}, {"naive", naive_cost}};
    if (naive_cost > 0.0) {
      entry["normalized"] = aware_cost / naive_cost;
    } else {
      entry["normalized"] = nullptr;
    }
    comparison["per_module"][module.id] = std::move(entry);
  }
  std::ofstream(out_dir / "comparison.json") << comparison.dump(1) << '\n';

  if (log_level() != LogLevel::quiet) {
    std::cout << "aware accumulated cost: " << aware.metrics.accumulated_cost << "\n";
    std::cout << "naive accumulated cost: " << naive.metrics.accumulated_cost << "\n";
    std::cout << "reduction: " << reduction << " %\n";
  }
  return 0;
}

void add_common_options(CLI::App * cmd, CliOptions & options)
{
  cmd->add_option("--map", options.map_path, "map JSON file")->required();
  cmd->add_option("--scenario", options.scenario_path, "scenario JSON file")->required();
  cmd->add_option("--catalog", options.catalog_path,
                  "module catalog JSON (default: built-in catalog)");
  cmd->add_option("--aggregation", options.aggregation, "performance aggregation: capped|plain")
    ->check(CLI::IsMember({"capped", "plain"}));
  cmd->add_option("--out", options.out_dir, "output directory (default: out)");
  cmd->add_flag("--dump-grids", options.dump_grids, "write per-frame grid and polar CSV dumps");
  cmd->add_option("--seed", options.seed, "RNG seed for the mock detectors");
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"situation-aware perception resource allocation simulator"};
  app.require_subcommand(1);

  CliOptions run_options;
  CLI::App * run = app.add_subcommand("run", "run one scenario in one mode");
  add_common_options(run, run_options);
  run->add_option("--mode", run_options.mode, "aware|naive")
    ->check(CLI::IsMember({"aware", "naive"}));

  CliOptions compare_options;
  CLI::App * compare =
    app.add_subcommand("compare", "run aware and naive modes and compare them");
  add_common_options(compare, compare_options);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return cmd_run(run_options);
    }
    return cmd_compare(compare_options);
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
