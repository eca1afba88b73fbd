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

#include "awarekit/config_optimizer.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <set>

#include "awarekit/errors.hpp"
#include "optimizer_trials.hpp"

using namespace awarekit;

namespace
{

PolarRequirementMap uniform_requirement(double p_req, double d_req = 50.0)
{
  PolarRequirementMap polar;
  for (auto & segment : polar.segments) {
    segment = {p_req, d_req};
  }
  return polar;
}

Situation in_zone(ZoneTag tag, std::set<SubSituation> sub = {})
{
  return Situation{tag, std::move(sub)};
}

std::optional<Selection> select_catalog(
  const ConfigForest & forest_template, const Situation & situation,
  const PolarRequirementMap & polar, const DynamicConstraints & constraints = {},
  AggregationMode mode = AggregationMode::source_capped)
{
  ConfigForest forest = forest_template;
  forest.update_for_situation(situation, static_cast<std::size_t>(polar.relevant_segment_count()));
  forest.apply_constraints(constraints);
  return forest.select_optimal(polar, situation, mode);
}

}  // namespace

TEST_CASE("forest over the bundled catalog has 15 nodes with 3 roots")
{
  const ModuleRegistry registry = default_catalog();
  const ConfigForest forest(registry);
  CHECK(forest.node_count() == 15);
  CHECK(forest.root_count() == 3);

  // no two nodes share a module set; children contain their parents
  std::set<std::vector<std::string>> sets;
  for (const ConfigNode & node : forest.nodes()) {
    CHECK(sets.insert(node.modules).second);
    if (node.parent >= 0) {
      const auto & parent = forest.nodes()[node.parent].modules;
      CHECK(std::includes(
        node.modules.begin(), node.modules.end(), parent.begin(), parent.end()));
    }
  }
}

TEST_CASE("forest size follows the source combinations")
{
  SUBCASE("one source, no non-source")
  {
    ModuleRegistry registry;
    ModuleDescriptor solo;
    solo.id = "solo";
    solo.category = "object_detection";
    solo.module_type = ModuleType::source;
    solo.performance = {1.0, 1.0, 1.0};
    registry.register_module(solo);
    const ConfigForest forest(registry);
    CHECK(forest.node_count() == 1);
    CHECK(forest.root_count() == 1);
  }
  SUBCASE("three sources, no non-source: nonempty power set")
  {
    ModuleRegistry registry;
    for (int i = 0; i < 3; ++i) {
      ModuleDescriptor m;
      m.id = "src_" + std::to_string(i);
      m.category = "object_detection";
      m.module_type = ModuleType::source;
      m.performance = {1.0, 1.0, 1.0};
      registry.register_module(m);
    }
    const ConfigForest forest(registry);
    CHECK(forest.node_count() == 7);
    CHECK(forest.root_count() == 7);
  }
}

TEST_CASE("forest completeness: node sets equal the constructible subsets")
{
  std::mt19937_64 rng(4242);
  for (int trial_index = 0; trial_index < 50; ++trial_index) {
    const auto trial = testing::random_trial(rng);
    const ConfigForest forest(trial.registry);

    std::set<std::vector<std::string>> forest_sets;
    for (const ConfigNode & node : forest.nodes()) {
      forest_sets.insert(node.modules);
    }

    std::vector<std::string> all_ids;
    for (const auto & m : trial.registry.modules()) {
      all_ids.push_back(m.id);
    }
    std::sort(all_ids.begin(), all_ids.end());
    std::set<std::vector<std::string>> constructible;
    for (std::size_t mask = 1; mask < (std::size_t{1} << all_ids.size()); ++mask) {
      std::vector<std::string> ids;
      for (std::size_t i = 0; i < all_ids.size(); ++i) {
        if (mask & (std::size_t{1} << i)) {
          ids.push_back(all_ids[i]);
        }
      }
      if (subset_constructible(trial.registry, ids)) {
        constructible.insert(ids);
      }
    }
    CHECK(forest_sets == constructible);
  }
}

TEST_CASE("update_for_situation gates tracking variant B on follow drive")
{
  const ModuleRegistry registry = default_catalog();
  ConfigForest forest(registry);

  auto trk_b_nodes_valid = [&forest]() {
    int valid = 0;
    int total = 0;
    for (const ConfigNode & node : forest.nodes()) {
      if (std::find(node.modules.begin(), node.modules.end(), "tracking_b") !=
          node.modules.end()) {
        ++total;
        valid += node.valid ? 1 : 0;
      }
    }
    return std::pair{valid, total};
  };

  forest.update_for_situation(in_zone(ZoneTag::highway, {SubSituation::follow_drive}));
  CHECK(trk_b_nodes_valid() == std::pair{6, 6});

  forest.update_for_situation(in_zone(ZoneTag::urban));
  CHECK(trk_b_nodes_valid() == std::pair{0, 6});

  forest.update_for_situation(in_zone(ZoneTag::highway, {SubSituation::follow_drive}));
  CHECK(trk_b_nodes_valid() == std::pair{6, 6});
}

TEST_CASE("check_coverage tests every required segment against member FoVs")
{
  const ModuleRegistry registry = default_catalog();

  SUBCASE("full-coverage catalog passes any requirement")
  {
    CHECK(check_coverage(registry, {"lidar_od"}, uniform_requirement(3.0, 1000.0)));
  }
  SUBCASE("front-only sensor fails a rear requirement")
  {
    ModuleRegistry partial;
    ModuleDescriptor cam;
    cam.id = "cam_front";
    cam.category = "object_detection";
    cam.module_type = ModuleType::source;
    cam.coverage = {270.0, 180.0, 100.0};  // facing +x: covers [270, 360) and [0, 90)
    cam.performance = {1.0, 1.0, 1.0};
    partial.register_module(cam);

    PolarRequirementMap rear;
    rear.segments[180] = {1.0, 20.0};
    CHECK_FALSE(check_coverage(partial, {"cam_front"}, rear));

    PolarRequirementMap front;
    front.segments[10] = {1.0, 20.0};
    CHECK(check_coverage(partial, {"cam_front"}, front));
    front.segments[10].d_req = 150.0;  // beyond the 100 m range
    CHECK_FALSE(check_coverage(partial, {"cam_front"}, front));
  }
  SUBCASE("empty requirement is vacuously covered")
  {
    CHECK(check_coverage(registry, {"radar_od"}, PolarRequirementMap{}));
  }
}

TEST_CASE("aggregate_performance applies the source cap")
{
  const ModuleRegistry registry = default_catalog();
  const Situation urban = in_zone(ZoneTag::urban);

  const auto lidar_trk =
    aggregate_performance(registry, {"lidar_od", "tracking_a"}, urban,
                          AggregationMode::source_capped);
  CHECK(lidar_trk[0] == 2.0);

  const auto radar_chain = aggregate_performance(
    registry, {"plausib", "radar_od", "tracking_a"}, urban, AggregationMode::source_capped);
  CHECK(radar_chain[0] == doctest::Approx(1.5).epsilon(1e-12));  // 0.5 + 0.5 + 0.5

  const auto full_chain = aggregate_performance(
    registry, {"lidar_od", "plausib", "tracking_a"}, urban, AggregationMode::source_capped);
  CHECK(full_chain[0] == 3.0);

  SUBCASE("plain additive mode sums the literal values")
  {
    const auto plain = aggregate_performance(
      registry, {"plausib", "radar_od", "tracking_a"}, urban, AggregationMode::plain_additive);
    CHECK(plain[0] == 2.5);
  }
}

TEST_CASE("apply_constraints prunes with whitelists and blacklists")
{
  const ModuleRegistry registry = default_catalog();
  ConfigForest forest(registry);
  forest.update_for_situation(in_zone(ZoneTag::urban));

  SUBCASE("requiring two detection modules keeps only dual-OD nodes")
  {
    DynamicConstraints constraints;
    constraints.require_category = {{"object_detection", 2}};
    forest.apply_constraints(constraints);
    for (const ConfigNode & node : forest.nodes()) {
      if (node.valid) {
        CHECK(std::count_if(node.modules.begin(), node.modules.end(), [&](const auto & id) {
                return registry.at(id).category == "object_detection";
              }) == 2);
      }
    }
  }
  SUBCASE("blacklisting the radar invalidates its nodes, reset restores them")
  {
    DynamicConstraints constraints;
    constraints.forbid_modules = {"radar_od"};
    forest.apply_constraints(constraints);
    int radar_valid = 0;
    for (const ConfigNode & node : forest.nodes()) {
      if (node.valid &&
          std::find(node.modules.begin(), node.modules.end(), "radar_od") != node.modules.end()) {
        ++radar_valid;
      }
    }
    CHECK(radar_valid == 0);

    forest.update_for_situation(in_zone(ZoneTag::urban));
    radar_valid = 0;
    for (const ConfigNode & node : forest.nodes()) {
      if (node.valid &&
          std::find(node.modules.begin(), node.modules.end(), "radar_od") != node.modules.end()) {
        ++radar_valid;
      }
    }
    CHECK(radar_valid > 0);
  }
  SUBCASE("empty constraints change nothing")
  {
    const auto before = forest.nodes();
    forest.apply_constraints(DynamicConstraints{});
    for (std::size_t i = 0; i < before.size(); ++i) {
      CHECK(before[i].valid == forest.nodes()[i].valid);
    }
  }
}

TEST_CASE("select_optimal reproduces the catalog selections")
{
  const ModuleRegistry registry = default_catalog();
  const ConfigForest forest(registry);

  SUBCASE("highway, requirement 2: radar plus tracking A at 0.43")
  {
    const auto selection =
      select_catalog(forest, in_zone(ZoneTag::highway), uniform_requirement(2.0));
    REQUIRE(selection.has_value());
    CHECK(selection->modules == std::vector<std::string>{"radar_od", "tracking_a"});
    CHECK(selection->cost == doctest::Approx(0.43).epsilon(1e-12));
  }
  SUBCASE("highway follow drive, requirement 2: radar plus tracking B at 0.38")
  {
    const auto selection = select_catalog(
      forest, in_zone(ZoneTag::highway, {SubSituation::follow_drive}), uniform_requirement(2.0));
    REQUIRE(selection.has_value());
    CHECK(selection->modules == std::vector<std::string>{"radar_od", "tracking_b"});
    CHECK(selection->cost == doctest::Approx(0.38).epsilon(1e-12));
  }
  SUBCASE("urban, requirement 3: lidar chain at 1.15")
  {
    const auto selection =
      select_catalog(forest, in_zone(ZoneTag::urban), uniform_requirement(3.0));
    REQUIRE(selection.has_value());
    CHECK(selection->modules == std::vector<std::string>{"lidar_od", "plausib", "tracking_a"});
    CHECK(selection->cost == doctest::Approx(1.15).epsilon(1e-12));
  }
  SUBCASE("urban, requirement 4: infeasible")
  {
    const auto selection =
      select_catalog(forest, in_zone(ZoneTag::urban), uniform_requirement(4.0));
    CHECK_FALSE(selection.has_value());
  }
  SUBCASE("empty requirement: empty configuration at zero cost")
  {
    const auto selection =
      select_catalog(forest, in_zone(ZoneTag::urban), PolarRequirementMap{});
    REQUIRE(selection.has_value());
    CHECK(selection->modules.empty());
    CHECK(selection->cost == 0.0);
  }
}

TEST_CASE("brute_force_optimal matches the forest on the catalog cases")
{
  const ModuleRegistry registry = default_catalog();
  const ConfigForest forest(registry);
  const std::vector<Situation> situations{
    in_zone(ZoneTag::highway), in_zone(ZoneTag::highway, {SubSituation::follow_drive}),
    in_zone(ZoneTag::rural), in_zone(ZoneTag::urban),
    in_zone(ZoneTag::urban, {SubSituation::complex_intersection})};
  for (const Situation & situation : situations) {
    for (double p : {0.0, 1.0, 2.0, 3.0, 4.0}) {
      const PolarRequirementMap polar =
        p == 0.0 ? PolarRequirementMap{} : uniform_requirement(p);
      DynamicConstraints constraints;
      if (situation.has(SubSituation::complex_intersection)) {
        constraints = resolve_constraints(default_constraint_rules(), situation);
      }
      const auto fast = select_catalog(forest, situation, polar, constraints);
      const auto oracle = brute_force_optimal(registry, polar, situation, constraints);
      CHECK(fast == oracle);
    }
  }
}

TEST_CASE("brute_force_optimal refuses oversized registries")
{
  ModuleRegistry registry;
  for (int i = 0; i < 13; ++i) {
    ModuleDescriptor m;
    m.id = "m" + std::to_string(i);
    m.category = "object_detection";
    m.module_type = ModuleType::source;
    registry.register_module(m);
  }
  CHECK_THROWS_AS(
    brute_force_optimal(registry, uniform_requirement(1.0), in_zone(ZoneTag::rural), {}),
    Error);
}

TEST_CASE("randomized oracle equivalence including tie-breaks")
{
  std::mt19937_64 rng(20260809);
  int nonempty_agreements = 0;
  for (int i = 0; i < 300; ++i) {
    const auto trial = testing::random_trial(rng);
    const auto fast = testing::forest_selection(trial);
    const auto oracle =
      brute_force_optimal(trial.registry, trial.polar, trial.situation, trial.constraints,
                          trial.mode);
    REQUIRE(fast == oracle);
    if (fast && !fast->modules.empty()) {
      ++nonempty_agreements;
    }
  }
  CHECK(nonempty_agreements > 30);  // the generator produces meaningful cases
}

TEST_CASE("selected cost is exactly the member cost sum")
{
  std::mt19937_64 rng(99);
  for (int i = 0; i < 100; ++i) {
    const auto trial = testing::random_trial(rng);
    const auto selection = testing::forest_selection(trial);
    if (!selection) {
      continue;
    }
    double expected = 0.0;
    for (const auto & id : selection->modules) {
      expected += cost_for(
        trial.registry.at(id), static_cast<std::size_t>(trial.polar.relevant_segment_count()));
    }
    CHECK(selection->cost == expected);
  }
}

TEST_CASE("monotone pruning: blacklists and higher requirements never cut cost")
{
  std::mt19937_64 rng(12345);
  int considered = 0;
  for (int i = 0; i < 200 && considered < 60; ++i) {
    auto trial = testing::random_trial(rng);
    const auto base = testing::forest_selection(trial);
    if (!base || base->modules.empty()) {
      continue;
    }
    ++considered;

    auto stricter = trial;
    stricter.constraints.forbid_modules.push_back(base->modules.front());
    const auto pruned = testing::forest_selection(stricter);
    if (pruned) {
      CHECK(pruned->cost >= base->cost);
    }

    auto harder = trial;
    for (auto & segment : harder.polar.segments) {
      if (segment.p_req > 0.0) {
        segment.p_req += 0.5;
      }
    }
    const auto raised = testing::forest_selection(harder);
    if (raised) {
      CHECK(raised->cost >= base->cost);
    }
  }
  CHECK(considered > 0);
}

TEST_CASE("scaling all costs leaves the selected set unchanged")
{
  std::mt19937_64 rng(777);
  for (int i = 0; i < 60; ++i) {
    auto trial = testing::random_trial(rng);
    const auto base = testing::forest_selection(trial);

    ModuleRegistry scaled;
    for (ModuleDescriptor m : trial.registry.modules()) {
      m.cost_model.base *= 3.0;
      m.cost_model.per_item *= 3.0;
      scaled.register_module(std::move(m));
    }
    auto scaled_trial = trial;
    scaled_trial.registry = scaled;
    const auto scaled_selection = testing::forest_selection(scaled_trial);

    REQUIRE(base.has_value() == scaled_selection.has_value());
    if (base) {
      CHECK(base->modules == scaled_selection->modules);
    }
  }
}

TEST_CASE("constraint rules load from JSON and merge per situation")
{
  const ConstraintRules rules = load_constraint_rules(AWAREKIT_DATA_DIR "/constraints.json");
  REQUIRE(rules.size() == 1);

  const Situation plain = in_zone(ZoneTag::urban);
  CHECK(resolve_constraints(rules, plain).empty());

  const Situation complex = in_zone(ZoneTag::urban, {SubSituation::complex_intersection});
  const DynamicConstraints merged = resolve_constraints(rules, complex);
  REQUIRE(merged.require_category.size() == 1);
  CHECK(merged.require_category[0] == std::pair<std::string, int>{"object_detection", 2});

  // matches the built-in default rule
  const DynamicConstraints built_in =
    resolve_constraints(default_constraint_rules(), complex);
  CHECK(merged == built_in);
}
