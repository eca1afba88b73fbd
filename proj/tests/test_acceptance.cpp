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

// End-to-end acceptance suite. Each case prints one line of the form
//   [criterion N] PASS — ...
// when it runs to completion; doctest reports any failures.

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <chrono>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "awarekit/attention_map.hpp"
#include "awarekit/config_optimizer.hpp"
#include "awarekit/module_registry.hpp"
#include "awarekit/pipeline_sim.hpp"
#include "optimizer_trials.hpp"

using namespace awarekit;

namespace
{

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start)
{
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void pass(int criterion, const std::string & detail)
{
  std::cout << "[criterion " << criterion << "] PASS - " << detail << "\n";
}

RunResult run_bundled(const char * map_name, const char * scenario_name,
                      SimulationOptions options = {}, CycleObserver observer = {})
{
  const MapModel map = load_map(std::string(AWAREKIT_DATA_DIR "/maps/") + map_name);
  const Scenario scenario =
    load_scenario(std::string(AWAREKIT_DATA_DIR "/scenarios/") + scenario_name);
  return run_scenario(map, default_catalog(), scenario, options, std::move(observer));
}

std::vector<std::string> ids(std::initializer_list<const char *> list)
{
  std::vector<std::string> v;
  for (const char * s : list) {
    v.emplace_back(s);
  }
  return v;
}

double cycle_cost(const CycleResult & cycle)
{
  double cost = 0.0;
  for (const auto & [id, c] : cycle.module_costs) {
    cost += c;
  }
  return cost;
}

}  // namespace

TEST_CASE("criterion 1: forest cardinality over the bundled catalog")
{
  const ModuleRegistry registry = default_catalog();
  { const ConfigForest warmup(registry); REQUIRE(warmup.node_count() == 15); }

  const auto start = Clock::now();
  const ConfigForest forest(registry);
  const double elapsed = ms_since(start);

  REQUIRE(forest.node_count() == 15);
  REQUIRE(forest.root_count() == 3);
  CHECK(elapsed < 1.0);
  pass(1, "15 nodes, 3 roots, built in " + std::to_string(elapsed) + " ms");
}

TEST_CASE("criterion 2: highway-to-urban scenario selects per the catalog narrative")
{
  const auto start = Clock::now();
  const RunResult result = run_bundled("straight_route.json", "fig6_highway_urban.json");
  const double elapsed = ms_since(start);

  REQUIRE(result.cycles.size() == 30);
  for (std::size_t i = 0; i < 30; ++i) {
    const auto & active = result.cycles[i].active_modules;
    if (i < 10) {
      REQUIRE(active == ids({"radar_od", "tracking_a"}));
    } else if (i < 20) {
      REQUIRE(active == ids({"radar_od", "tracking_b"}));  // follow-drive interval
    } else {
      REQUIRE(active == ids({"lidar_od", "tracking_a"}));  // urban, no relevant objects
    }
    REQUIRE_FALSE(result.cycles[i].degraded);
  }
  CHECK(elapsed < 1000.0);
  pass(2, "selections {radar,trkA} -> {radar,trkB} -> {lidar,trkA} in " +
            std::to_string(elapsed) + " ms");
}

TEST_CASE("criterion 3: urban intersection scenario escalates to the naive set")
{
  const RunResult result = run_bundled("urban_block.json", "fig7_urban_intersection.json");
  REQUIRE(result.cycles.size() == 30);

  // cycle 0 has no fed-back detections yet: the object layer is empty
  REQUIRE(result.cycles[0].active_modules == ids({"lidar_od", "tracking_a"}));
  for (std::size_t i = 1; i < 30; ++i) {
    const auto & active = result.cycles[i].active_modules;
    if (i >= 12 && i <= 19) {
      REQUIRE(active == ids({"lidar_od", "plausib", "radar_od", "tracking_a"}));
    } else {
      REQUIRE(active == ids({"lidar_od", "plausib", "tracking_a"}));
    }
  }
  pass(3, "urban {lidar,trkA,pls}; complex intersection escalates to all four modules");
}

TEST_CASE("criterion 4: selected configuration costs match the catalog arithmetic")
{
  const RunResult fig6 = run_bundled("straight_route.json", "fig6_highway_urban.json");
  const RunResult fig7 = run_bundled("urban_block.json", "fig7_urban_intersection.json");

  REQUIRE(std::abs(cycle_cost(fig6.cycles[5]) - 0.43) < 1e-12);
  REQUIRE(std::abs(cycle_cost(fig6.cycles[15]) - 0.38) < 1e-12);
  REQUIRE(std::abs(cycle_cost(fig7.cycles[5]) - 1.15) < 1e-12);
  REQUIRE(std::abs(cycle_cost(fig7.cycles[15]) - 1.48) < 1e-12);
  pass(4, "cycle costs 0.43 / 0.38 / 1.15 / 1.48 exact to 1e-12");
}

TEST_CASE("criterion 5: 1000-trial oracle equivalence")
{
  const auto start = Clock::now();
  std::mt19937_64 rng(0x5EED5EEDULL);
  int agreements = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto trial = awarekit::testing::random_trial(rng);
    const auto fast = awarekit::testing::forest_selection(trial);
    const auto oracle = brute_force_optimal(
      trial.registry, trial.polar, trial.situation, trial.constraints, trial.mode);
    REQUIRE(fast == oracle);
    ++agreements;
  }
  const double elapsed = ms_since(start);
  REQUIRE(agreements == 1000);
  CHECK(elapsed < 60000.0);
  pass(5, "1000/1000 agreement with the powerset oracle in " + std::to_string(elapsed) + " ms");
}

TEST_CASE("criterion 6: MLAM invariants")
{
  GridSpec spec;
  std::mt19937 rng(606);
  std::uniform_int_distribution<int> cell(0, spec.size_cells - 1);

  // sum-combination commutativity
  std::vector<LayerGrid> layers;
  for (int i = 0; i < 3; ++i) {
    LayerGrid layer(spec);
    for (int k = 0; k < 40; ++k) {
      layer.values(cell(rng), cell(rng)) = 1.0;
    }
    layers.push_back(dilate(layer, 5));
  }
  const AttentionGrid combined = combine(layers);
  std::vector<LayerGrid> shuffled = layers;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  REQUIRE((combine(shuffled).values == combined.values).all());

  // 5x5 dilation of a single center cell
  LayerGrid point(spec);
  point.values(spec.half(), spec.half()) = 1.0;
  int dilated_cells = static_cast<int>((dilate(point, 5).values > 0.0).count());
  REQUIRE(dilated_cells == 25);

  // polar conservatism over the combined grid
  const PolarRequirementMap polar = to_polar(combined);
  for (const CellIndex & c : relevant_cells(combined)) {
    const Vec2 offset = spec.cell_center(c) - spec.origin;
    double angle = rad_to_deg(std::atan2(offset.y(), offset.x()));
    if (angle < 0.0) {
      angle += 360.0;
    }
    const int segment = std::min(359, static_cast<int>(angle));
    REQUIRE(polar.segments[segment].p_req >= combined.at(c));
    REQUIRE(polar.segments[segment].d_req >= offset.norm() - 1e-9);
  }

  // strict theta_rel exclusion
  AttentionGrid at_threshold(spec, 2.0);
  at_threshold.values(10, 10) = 2.0;
  REQUIRE(relevant_cells(at_threshold).empty());

  // ego-path rotation equivariance by 90 degrees
  EgoState east;
  east.speed = 10.0;
  east.yaw_rate = 0.1;
  EgoState north = east;
  north.heading = std::numbers::pi / 2.0;
  const LayerGrid path_east = layer_ego_path(east, spec);
  const LayerGrid path_north = layer_ego_path(north, spec);
  for (int x = 0; x < spec.size_cells; ++x) {
    for (int y = 0; y < spec.size_cells; ++y) {
      const int rx = spec.half() - (y - spec.half());
      const int ry = spec.half() + (x - spec.half());
      REQUIRE(path_east.values(x, y) == path_north.values(rx, ry));
    }
  }

  pass(6, "combination, dilation, polar conservatism, strict threshold, rotation equivariance");
}

TEST_CASE("criterion 7: desk-scale reduction matches the offline oracle expectation")
{
  struct CycleSnapshot
  {
    Situation situation;
    DynamicConstraints constraints;
    PolarRequirementMap polar;
  };
  std::vector<CycleSnapshot> snapshots;
  const RunResult aware = run_bundled(
    "ring_route.json", "mixed_ring.json", {},
    [&snapshots](const CycleTrace & trace) {
      snapshots.push_back({trace.situation, trace.constraints, trace.polar});
    });

  REQUIRE(aware.metrics.degraded_cycles == 0);
  REQUIRE(snapshots.size() == aware.cycles.size());

  const ModuleRegistry registry = default_catalog();
  double expected_cost = 0.0;
  for (const CycleSnapshot & snap : snapshots) {
    const auto oracle = brute_force_optimal(
      registry, snap.polar, snap.situation, snap.constraints, AggregationMode::source_capped);
    REQUIRE(oracle.has_value());
    expected_cost += oracle->cost;
  }

  const double expected_ratio = expected_cost / aware.metrics.naive_reference_cost;
  REQUIRE(std::abs(aware.metrics.cost_ratio - expected_ratio) <= 1e-9);
  REQUIRE(aware.metrics.cost_ratio < 1.0);
  CHECK(aware.metrics.overhead.mean_ms < 50.0);  // soft per-cycle budget, 151x151 grid

  std::ostringstream detail;
  detail << "cost ratio " << aware.metrics.cost_ratio << " (reduction "
         << 100.0 * (1.0 - aware.metrics.cost_ratio) << " %), overhead mean "
         << aware.metrics.overhead.mean_ms << " ms, max " << aware.metrics.overhead.max_ms
         << " ms per cycle";
  pass(7, detail.str());
}

TEST_CASE("criterion 8: baseline and tracking uptime")
{
  SimulationOptions naive;
  naive.mode = RunMode::naive;
  const RunResult baseline = run_bundled("ring_route.json", "mixed_ring.json", naive);
  for (const char * id : {"lidar_od", "radar_od", "tracking_a", "plausib"}) {
    REQUIRE(baseline.metrics.uptime.at(id) == 1.0);
  }

  const struct
  {
    const char * map;
    const char * scenario;
  } aware_runs[] = {
    {"straight_route.json", "fig6_highway_urban.json"},
    {"urban_block.json", "fig7_urban_intersection.json"},
    {"ring_route.json", "mixed_ring.json"},
  };
  for (const auto & run : aware_runs) {
    const RunResult aware = run_bundled(run.map, run.scenario);
    for (const CycleResult & cycle : aware.cycles) {
      int tracking_active = 0;
      for (const auto & id : cycle.active_modules) {
        tracking_active += (id == "tracking_a" || id == "tracking_b") ? 1 : 0;
      }
      REQUIRE(tracking_active == 1);  // one tracking variant active at all times
    }
  }
  pass(8, "naive uptime 1.0 for all four modules; one tracking variant always active");
}

TEST_CASE("criterion 9: byte-identical cycle logs for identical inputs and seed")
{
  SimulationOptions options;
  options.seed = 424242;
  auto serialize = [&]() {
    const RunResult result = run_bundled("ring_route.json", "mixed_ring.json", options);
    std::ostringstream out;
    for (const CycleResult & cycle : result.cycles) {
      out << cycle_to_json(cycle).dump() << '\n';
    }
    return out.str();
  };
  const std::string first = serialize();
  const std::string second = serialize();
  REQUIRE(first == second);
  pass(9, "two runs produced " + std::to_string(first.size()) + " identical bytes");
}
