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

#include "awarekit/situation.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "awarekit/errors.hpp"

using namespace awarekit;
using nlohmann::json;

namespace
{

MapModel split_zone_map()
{
  return map_from_json(json::parse(R"({
    "lanes": [
      {"id": "a", "centerline": [[-50, 0], [0, 0], [50, 0], [100, 0]],
       "successors": [], "adjacent": []}
    ],
    "zones": [
      {"tag": "highway", "polygon": [[-60, -10], [49, -10], [49, 10], [-60, 10]]},
      {"tag": "urban", "polygon": [[49, -10], [110, -10], [110, 10], [49, 10]]}
    ]
  })"));
}

Frame highway_frame()
{
  Frame frame;
  frame.timestamp = 0.0;
  frame.ego.position = {0.0, 0.0};
  frame.ego.heading = 0.0;
  frame.ego.speed = 20.0;
  return frame;
}

GroundTruthObject vehicle(std::string id, Vec2 pos, Vec2 vel)
{
  GroundTruthObject obj;
  obj.id = std::move(id);
  obj.position = pos;
  obj.velocity = vel;
  obj.category = ObjectCategory::vehicle;
  return obj;
}

}  // namespace

TEST_CASE("active_layers follows the activation table per location")
{
  CHECK(active_layers({ZoneTag::highway, {}}) == LayerActivation{true, false, true, false});
  CHECK(active_layers({ZoneTag::rural, {}}) == LayerActivation{true, false, true, true});
  CHECK(active_layers({ZoneTag::urban, {}}) == LayerActivation{true, true, true, true});
}

TEST_CASE("active_layers depends on the location only")
{
  for (ZoneTag tag : {ZoneTag::highway, ZoneTag::rural, ZoneTag::urban}) {
    const Situation plain{tag, {}};
    const Situation busy{tag, {SubSituation::follow_drive, SubSituation::complex_intersection}};
    CHECK(active_layers(plain) == active_layers(busy));
  }
}

TEST_CASE("activation table loads from JSON and matches the default")
{
  const ActivationTable loaded = ActivationTable::load(AWAREKIT_DATA_DIR "/activation.json");
  const ActivationTable defaults;
  for (ZoneTag tag : {ZoneTag::highway, ZoneTag::rural, ZoneTag::urban}) {
    CHECK(loaded.for_location(tag) == defaults.for_location(tag));
  }

  const ActivationTable custom =
    ActivationTable::from_json(json::parse(R"({"highway": []})"));
  CHECK(custom.for_location(ZoneTag::highway).count() == 0);

  CHECK_THROWS_AS(
    ActivationTable::from_json(json::parse(R"({"space": ["object"]})")), ParseError);
}

TEST_CASE("detect_situation resolves location and sub-situations")
{
  const MapModel map = split_zone_map();

  SUBCASE("highway, empty road")
  {
    const Situation s = detect_situation(map, highway_frame());
    CHECK(s.location == ZoneTag::highway);
    CHECK(s.sub.empty());
  }
  SUBCASE("urban with complex intersection annotation")
  {
    Frame frame = highway_frame();
    frame.ego.position = {60.0, 0.0};
    frame.annotations.insert(SubSituation::complex_intersection);
    const Situation s = detect_situation(map, frame);
    CHECK(s.location == ZoneTag::urban);
    CHECK(s.has(SubSituation::complex_intersection));
  }
  SUBCASE("highway with a steady lead vehicle")
  {
    Frame frame = highway_frame();
    frame.objects.push_back(vehicle("lead", {20.0, 0.0}, {20.0, 0.0}));
    const Situation s = detect_situation(map, frame);
    CHECK(s.location == ZoneTag::highway);
    CHECK(s.has(SubSituation::follow_drive));
  }
}

TEST_CASE("detect_follow_drive gates on lane, window, speed, and heading")
{
  const MapModel map = split_zone_map();
  Frame frame = highway_frame();

  SUBCASE("steady lead 20 m ahead")
  {
    frame.objects.push_back(vehicle("lead", {20.0, 0.0}, {20.0, 0.0}));
    CHECK(detect_follow_drive(map, frame));
  }
  SUBCASE("oncoming vehicle fails the heading gate")
  {
    frame.objects.push_back(vehicle("oncoming", {20.0, 0.0}, {-20.0, 0.0}));
    CHECK_FALSE(detect_follow_drive(map, frame));
  }
  SUBCASE("empty road")
  {
    CHECK_FALSE(detect_follow_drive(map, frame));
  }
  SUBCASE("speed gap of 2 m/s or more fails the speed gate")
  {
    frame.objects.push_back(vehicle("slow", {20.0, 0.0}, {17.9, 0.0}));
    CHECK_FALSE(detect_follow_drive(map, frame));
  }
  SUBCASE("lead beyond 40 m is outside the window")
  {
    frame.objects.push_back(vehicle("far", {45.0, 0.0}, {20.0, 0.0}));
    CHECK_FALSE(detect_follow_drive(map, frame));
  }
  SUBCASE("two vehicles in the window break uniqueness")
  {
    frame.objects.push_back(vehicle("lead", {20.0, 0.0}, {20.0, 0.0}));
    frame.objects.push_back(vehicle("lead2", {35.0, 0.0}, {20.0, 0.0}));
    CHECK_FALSE(detect_follow_drive(map, frame));
  }
  SUBCASE("object beside the lane does not count")
  {
    frame.objects.push_back(vehicle("lead", {20.0, 0.0}, {20.0, 0.0}));
    frame.objects.push_back(vehicle("parked", {25.0, 6.0}, {0.0, 0.0}));
    CHECK(detect_follow_drive(map, frame));  // parked car is off-lane, lead stays unique
  }
}

TEST_CASE("no annotations and no objects always yield an empty sub-set")
{
  const MapModel map = split_zone_map();
  for (double x : {-40.0, 0.0, 30.0, 60.0, 90.0}) {
    Frame frame = highway_frame();
    frame.ego.position = {x, 0.0};
    CHECK(detect_situation(map, frame).sub.empty());
  }
}
