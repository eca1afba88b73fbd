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

#ifndef AWAREKIT_WORLD_MODEL_HPP_
#define AWAREKIT_WORLD_MODEL_HPP_

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "awarekit/geometry.hpp"

namespace awarekit
{

enum class ZoneTag { highway, rural, urban };

/// Zone used when a position lies outside every zone polygon.
inline constexpr ZoneTag kDefaultZone = ZoneTag::rural;

const char * to_string(ZoneTag tag);
std::optional<ZoneTag> zone_tag_from_string(std::string_view name);

enum class SubSituation { follow_drive, complex_intersection };

const char * to_string(SubSituation sub);
std::optional<SubSituation> sub_situation_from_string(std::string_view name);

enum class ObjectCategory { vehicle, vru, static_object };

const char * to_string(ObjectCategory category);
std::optional<ObjectCategory> object_category_from_string(std::string_view name);

struct Zone
{
  ZoneTag tag{ZoneTag::rural};
  Polygon polygon;

  bool operator==(const Zone & other) const;
};

struct LaneSegment
{
  std::string id;
  Polyline centerline;                  // >= 2 points, consecutive points distinct
  std::vector<std::string> successors;  // ids of lanes reachable by a valid transition
  std::vector<std::string> adjacent;    // ids of same-direction neighbour lanes
  bool is_own_candidate{true};          // hint: lane may be the ego's own lane

  bool operator==(const LaneSegment & other) const;
};

/// Static road description: lane centerlines plus zone polygons tagging the
/// geographic location. Immutable after load; all queries are pure.
struct MapModel
{
  std::vector<LaneSegment> lanes;
  std::vector<Zone> zones;  // zone order is the tie-break for overlapping polygons

  const LaneSegment * find_lane(std::string_view id) const;

  bool operator==(const MapModel & other) const;
};

struct EgoState
{
  Vec2 position{0.0, 0.0};  // world frame, meters
  double heading{0.0};      // radians
  double speed{0.0};        // m/s, >= 0
  double yaw_rate{0.0};     // rad/s
};

struct GroundTruthObject
{
  std::string id;
  Vec2 position{0.0, 0.0};
  Vec2 velocity{0.0, 0.0};
  ObjectCategory category{ObjectCategory::vehicle};
};

struct Frame
{
  double timestamp{0.0};  // seconds, strictly increasing across a scenario
  EgoState ego;
  std::vector<GroundTruthObject> objects;
  std::set<SubSituation> annotations;
};

/// Time-indexed recording replayed by the simulator.
struct Scenario
{
  double cycle_period{0.1};  // seconds between frames, uniform within 1e-6 s
  std::vector<Frame> frames;
};

MapModel load_map(const std::filesystem::path & path);
MapModel map_from_json(const nlohmann::json & j);
nlohmann::json map_to_json(const MapModel & map);

Scenario load_scenario(const std::filesystem::path & path);
Scenario scenario_from_json(const nlohmann::json & j);
nlohmann::json scenario_to_json(const Scenario & scenario);

/// Tag of the first zone (file order) containing the position; kDefaultZone if none does.
ZoneTag zone_at(const MapModel & map, const Vec2 & position);

/// Lane nearest the ego whose local tangent agrees with the ego heading
/// (< 90 degrees), nullptr when the nearest candidate is farther than 5 m.
/// Equidistant lanes (within 1e-9 m) resolve to the lower id.
const LaneSegment * own_lane_at(const MapModel & map, const EgoState & ego);

/// Lanes with any centerline vertex inside the closed ball of given radius, in id order.
std::vector<const LaneSegment *> lanes_within_radius(
  const MapModel & map, const Vec2 & position, double radius_m);

/// Breadth-first successor closure up to depth, including the start lane,
/// duplicates removed, in id order. Cycles terminate via the visited set.
std::vector<const LaneSegment *> lane_successors_transitive(
  const MapModel & map, const LaneSegment & lane, int depth);

}  // namespace awarekit

#endif  // AWAREKIT_WORLD_MODEL_HPP_
