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

#include "awarekit/world_model.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_set>

#include "awarekit/errors.hpp"
#include "json_util.hpp"

namespace awarekit
{

namespace
{

constexpr double kOwnLaneMaxDistance = 5.0;   // m
constexpr double kOwnLaneTieTolerance = 1e-9;  // m
constexpr double kCyclePeriodTolerance = 1e-6;  // s

using nlohmann::json;

Vec2 point_from_json(const json & j, const std::string & context)
{
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError(context + ": expected a point [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<Vec2> points_from_json(const json & j, const std::string & context)
{
  if (!j.is_array()) {
    throw ParseError(context + ": expected an array of points");
  }
  std::vector<Vec2> points;
  points.reserve(j.size());
  for (const auto & p : j) {
    points.push_back(point_from_json(p, context));
  }
  return points;
}

json points_to_json(const std::vector<Vec2> & points)
{
  json arr = json::array();
  for (const auto & p : points) {
    arr.push_back({p.x(), p.y()});
  }
  return arr;
}

std::vector<std::string> ids_from_json(const json & parent, const char * key,
                                       const std::string & context)
{
  std::vector<std::string> ids;
  auto it = parent.find(key);
  if (it == parent.end()) {
    return ids;
  }
  if (!it->is_array()) {
    throw ParseError(context + ": field \"" + key + "\" must be an array of ids");
  }
  for (const auto & id : *it) {
    if (!id.is_string()) {
      throw ParseError(context + ": field \"" + key + "\" must contain strings");
    }
    ids.push_back(id.get<std::string>());
  }
  return ids;
}

bool points_equal(const std::vector<Vec2> & a, const std::vector<Vec2> & b)
{
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](const Vec2 & p, const Vec2 & q) {
           return p.x() == q.x() && p.y() == q.y();
         });
}

void validate_map(const MapModel & map)
{
  std::unordered_set<std::string> ids;
  for (const auto & lane : map.lanes) {
    if (!ids.insert(lane.id).second) {
      throw ValidationError("duplicate lane id \"" + lane.id + "\"");
    }
    if (lane.centerline.size() < 2) {
      throw ValidationError("lane \"" + lane.id + "\": centerline needs at least 2 points");
    }
    for (std::size_t i = 0; i + 1 < lane.centerline.size(); ++i) {
      if ((lane.centerline[i] - lane.centerline[i + 1]).isZero(0.0)) {
        throw ValidationError(
          "lane \"" + lane.id + "\": consecutive centerline points are identical at index " +
          std::to_string(i));
      }
    }
  }
  for (const auto & lane : map.lanes) {
    for (const auto & list : {lane.successors, lane.adjacent}) {
      for (const auto & ref : list) {
        if (ids.find(ref) == ids.end()) {
          throw ValidationError(
            "lane \"" + lane.id + "\" references unknown lane \"" + ref + "\"");
        }
      }
    }
  }
  for (const auto & zone : map.zones) {
    if (!polygon_is_simple(zone.polygon)) {
      throw ValidationError(
        std::string("zone \"") + to_string(zone.tag) + "\": polygon is not simple");
    }
  }
  for (const auto & lane : map.lanes) {
    for (const auto & p : lane.centerline) {
      const bool covered = std::any_of(map.zones.begin(), map.zones.end(), [&](const Zone & z) {
        return point_in_polygon(z.polygon, p);
      });
      if (!covered) {
        throw ValidationError("lane \"" + lane.id + "\" lies outside all zones");
      }
    }
  }
}

void validate_scenario(const Scenario & scenario)
{
  if (scenario.frames.empty()) {
    throw ValidationError("scenario has no frames");
  }
  if (!(scenario.cycle_period > 0.0)) {
    throw ValidationError("cycle_period must be positive");
  }
  for (std::size_t i = 0; i < scenario.frames.size(); ++i) {
    const Frame & frame = scenario.frames[i];
    if (frame.ego.speed < 0.0) {
      throw ValidationError("frame " + std::to_string(i) + ": ego speed is negative");
    }
    for (const auto & obj : frame.objects) {
      if (!obj.position.allFinite() || !obj.velocity.allFinite()) {
        throw ValidationError(
          "frame " + std::to_string(i) + ": object \"" + obj.id + "\" has non-finite state");
      }
    }
    if (i == 0) {
      continue;
    }
    const double dt = frame.timestamp - scenario.frames[i - 1].timestamp;
    if (dt <= 0.0) {
      throw ValidationError(
        "timestamp regression at frame " + std::to_string(i) + " (t=" +
        std::to_string(frame.timestamp) + ")");
    }
    if (std::abs(dt - scenario.cycle_period) > kCyclePeriodTolerance) {
      throw ValidationError(
        "frame " + std::to_string(i) + ": cycle period deviates from " +
        std::to_string(scenario.cycle_period) + " s");
    }
  }
}

}  // namespace

const char * to_string(ZoneTag tag)
{
  switch (tag) {
    case ZoneTag::highway: return "highway";
    case ZoneTag::rural: return "rural";
    case ZoneTag::urban: return "urban";
  }
  return "rural";
}

std::optional<ZoneTag> zone_tag_from_string(std::string_view name)
{
  if (name == "highway") return ZoneTag::highway;
  if (name == "rural") return ZoneTag::rural;
  if (name == "urban") return ZoneTag::urban;
  return std::nullopt;
}

const char * to_string(SubSituation sub)
{
  switch (sub) {
    case SubSituation::follow_drive: return "follow_drive";
    case SubSituation::complex_intersection: return "complex_intersection";
  }
  return "follow_drive";
}

std::optional<SubSituation> sub_situation_from_string(std::string_view name)
{
  if (name == "follow_drive") return SubSituation::follow_drive;
  if (name == "complex_intersection") return SubSituation::complex_intersection;
  return std::nullopt;
}

const char * to_string(ObjectCategory category)
{
  switch (category) {
    case ObjectCategory::vehicle: return "vehicle";
    case ObjectCategory::vru: return "vru";
    case ObjectCategory::static_object: return "static";
  }
  return "vehicle";
}

std::optional<ObjectCategory> object_category_from_string(std::string_view name)
{
  if (name == "vehicle") return ObjectCategory::vehicle;
  if (name == "vru") return ObjectCategory::vru;
  if (name == "static") return ObjectCategory::static_object;
  return std::nullopt;
}

bool Zone::operator==(const Zone & other) const
{
  return tag == other.tag && points_equal(polygon, other.polygon);
}

bool LaneSegment::operator==(const LaneSegment & other) const
{
  return id == other.id && points_equal(centerline, other.centerline) &&
         successors == other.successors && adjacent == other.adjacent &&
         is_own_candidate == other.is_own_candidate;
}

bool MapModel::operator==(const MapModel & other) const
{
  return lanes == other.lanes && zones == other.zones;
}

const LaneSegment * MapModel::find_lane(std::string_view id) const
{
  for (const auto & lane : lanes) {
    if (lane.id == id) {
      return &lane;
    }
  }
  return nullptr;
}

MapModel map_from_json(const nlohmann::json & j)
{
  MapModel map;
  if (auto it = j.find("lanes"); it != j.end()) {
    for (const auto & jl : *it) {
      LaneSegment lane;
      lane.id = detail::require_string(jl, "id", "lane");
      const std::string ctx = "lane \"" + lane.id + "\"";
      lane.centerline = points_from_json(detail::require_field(jl, "centerline", ctx), ctx);
      lane.successors = ids_from_json(jl, "successors", ctx);
      lane.adjacent = ids_from_json(jl, "adjacent", ctx);
      lane.is_own_candidate = jl.value("is_own_candidate", true);
      map.lanes.push_back(std::move(lane));
    }
  }
  if (auto it = j.find("zones"); it != j.end()) {
    for (const auto & jz : *it) {
      Zone zone;
      const std::string tag = detail::require_string(jz, "tag", "zone");
      auto parsed = zone_tag_from_string(tag);
      if (!parsed) {
        throw ParseError("zone: unknown tag \"" + tag + "\"");
      }
      zone.tag = *parsed;
      zone.polygon = points_from_json(
        detail::require_field(jz, "polygon", "zone \"" + tag + "\""), "zone \"" + tag + "\"");
      map.zones.push_back(std::move(zone));
    }
  }
  validate_map(map);
  return map;
}

nlohmann::json map_to_json(const MapModel & map)
{
  json j;
  j["lanes"] = json::array();
  for (const auto & lane : map.lanes) {
    json jl;
    jl["id"] = lane.id;
    jl["centerline"] = points_to_json(lane.centerline);
    jl["successors"] = lane.successors;
    jl["adjacent"] = lane.adjacent;
    jl["is_own_candidate"] = lane.is_own_candidate;
    j["lanes"].push_back(std::move(jl));
  }
  j["zones"] = json::array();
  for (const auto & zone : map.zones) {
    json jz;
    jz["tag"] = to_string(zone.tag);
    jz["polygon"] = points_to_json(zone.polygon);
    j["zones"].push_back(std::move(jz));
  }
  return j;
}

MapModel load_map(const std::filesystem::path & path)
{
  return map_from_json(detail::load_json_file(path));
}

Scenario scenario_from_json(const nlohmann::json & j)
{
  Scenario scenario;
  scenario.cycle_period = detail::require_number(j, "cycle_period", "scenario");
  const auto & frames = detail::require_field(j, "frames", "scenario");
  for (const auto & jf : frames) {
    Frame frame;
    const std::string ctx = "frame " + std::to_string(scenario.frames.size());
    frame.timestamp = detail::require_number(jf, "t", ctx);
    const auto & je = detail::require_field(jf, "ego", ctx);
    frame.ego.position = {detail::require_number(je, "x", ctx),
                          detail::require_number(je, "y", ctx)};
    frame.ego.heading = detail::require_number(je, "heading", ctx);
    frame.ego.speed = detail::require_number(je, "speed", ctx);
    frame.ego.yaw_rate = detail::require_number(je, "yaw_rate", ctx);
    if (auto it = jf.find("objects"); it != jf.end()) {
      for (const auto & jo : *it) {
        GroundTruthObject obj;
        obj.id = detail::require_string(jo, "id", ctx);
        obj.position = {detail::require_number(jo, "x", ctx),
                        detail::require_number(jo, "y", ctx)};
        obj.velocity = {detail::require_number(jo, "vx", ctx),
                        detail::require_number(jo, "vy", ctx)};
        const std::string cat = detail::require_string(jo, "category", ctx);
        auto parsed = object_category_from_string(cat);
        if (!parsed) {
          throw ParseError(ctx + ": unknown object category \"" + cat + "\"");
        }
        obj.category = *parsed;
        frame.objects.push_back(std::move(obj));
      }
    }
    if (auto it = jf.find("annotations"); it != jf.end()) {
      for (const auto & ja : *it) {
        if (!ja.is_string()) {
          throw ParseError(ctx + ": annotations must be strings");
        }
        auto parsed = sub_situation_from_string(ja.get<std::string>());
        if (!parsed) {
          throw ValidationError(ctx + ": unknown annotation tag \"" + ja.get<std::string>() + "\"");
        }
        frame.annotations.insert(*parsed);
      }
    }
    scenario.frames.push_back(std::move(frame));
  }
  validate_scenario(scenario);
  return scenario;
}

nlohmann::json scenario_to_json(const Scenario & scenario)
{
  json j;
  j["cycle_period"] = scenario.cycle_period;
  j["frames"] = json::array();
  for (const auto & frame : scenario.frames) {
    json jf;
    jf["t"] = frame.timestamp;
    jf["ego"] = {{"x", frame.ego.position.x()},   {"y", frame.ego.position.y()},
                 {"heading", frame.ego.heading},  {"speed", frame.ego.speed},
                 {"yaw_rate", frame.ego.yaw_rate}};
    jf["objects"] = json::array();
    for (const auto & obj : frame.objects) {
      jf["objects"].push_back({{"id", obj.id},
                               {"x", obj.position.x()},
                               {"y", obj.position.y()},
                               {"vx", obj.velocity.x()},
                               {"vy", obj.velocity.y()},
                               {"category", to_string(obj.category)}});
    }
    jf["annotations"] = json::array();
    for (const auto & sub : frame.annotations) {
      jf["annotations"].push_back(to_string(sub));
    }
    j["frames"].push_back(std::move(jf));
  }
  return j;
}

Scenario load_scenario(const std::filesystem::path & path)
{
  return scenario_from_json(detail::load_json_file(path));
}

ZoneTag zone_at(const MapModel & map, const Vec2 & position)
{
  for (const auto & zone : map.zones) {
    if (point_in_polygon(zone.polygon, position)) {
      return zone.tag;
    }
  }
  return kDefaultZone;
}

const LaneSegment * own_lane_at(const MapModel & map, const EgoState & ego)
{
  const LaneSegment * best = nullptr;
  double best_distance = std::numeric_limits<double>::infinity();
  for (const auto & lane : map.lanes) {
    if (!lane.is_own_candidate) {
      continue;
    }
    const PolylinePoint proj = project_to_polyline(lane.centerline, ego.position);
    if (proj.distance > kOwnLaneMaxDistance) {
      continue;
    }
    if (angle_diff(proj.tangent_heading, ego.heading) >= std::numbers::pi / 2.0) {
      continue;
    }
    if (proj.distance < best_distance - kOwnLaneTieTolerance) {
      best = &lane;
      best_distance = proj.distance;
    } else if (std::abs(proj.distance - best_distance) <= kOwnLaneTieTolerance && best &&
               lane.id < best->id) {
      best = &lane;
      best_distance = std::min(best_distance, proj.distance);
    }
  }
  return best;
}

std::vector<const LaneSegment *> lanes_within_radius(
  const MapModel & map, const Vec2 & position, double radius_m)
{
  std::vector<const LaneSegment *> result;
  for (const auto & lane : map.lanes) {
    const bool inside = std::any_of(
      lane.centerline.begin(), lane.centerline.end(),
      [&](const Vec2 & p) { return (p - position).norm() <= radius_m; });
    if (inside) {
      result.push_back(&lane);
    }
  }
  std::sort(result.begin(), result.end(),
            [](const LaneSegment * a, const LaneSegment * b) { return a->id < b->id; });
  return result;
}

std::vector<const LaneSegment *> lane_successors_transitive(
  const MapModel & map, const LaneSegment & lane, int depth)
{
  std::unordered_set<std::string> visited{lane.id};
  std::deque<std::pair<const LaneSegment *, int>> queue{{&lane, 0}};
  std::vector<const LaneSegment *> result;
  while (!queue.empty()) {
    auto [current, level] = queue.front();
    queue.pop_front();
    result.push_back(current);
    if (level >= depth) {
      continue;
    }
    for (const auto & succ_id : current->successors) {
      if (visited.insert(succ_id).second) {
        if (const LaneSegment * succ = map.find_lane(succ_id)) {
          queue.emplace_back(succ, level + 1);
        }
      }
    }
  }
  std::sort(result.begin(), result.end(),
            [](const LaneSegment * a, const LaneSegment * b) { return a->id < b->id; });
  return result;
}

}  // namespace awarekit
