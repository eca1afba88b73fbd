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

#include <nlohmann/json.hpp>

#include <cmath>
#include <limits>

#include "awarekit/errors.hpp"
#include "json_util.hpp"

namespace awarekit
{

namespace
{

constexpr double kFollowRange = 40.0;                 // m ahead of the ego
constexpr double kFollowSpeedTolerance = 2.0;         // m/s relative speed
constexpr double kFollowHeadingTolerance = 30.0;       // deg vs. lane tangent
constexpr double kLaneMembershipLateral = 2.5;         // m off the centerline
constexpr int kOwnChainDepth = 3;

}  // namespace

ActivationTable::ActivationTable()
{
  table_[static_cast<std::size_t>(ZoneTag::highway)] = {true, false, true, false};
  table_[static_cast<std::size_t>(ZoneTag::rural)] = {true, false, true, true};
  table_[static_cast<std::size_t>(ZoneTag::urban)] = {true, true, true, true};
}

ActivationTable ActivationTable::from_json(const nlohmann::json & j)
{
  ActivationTable table;
  for (std::size_t i = 0; i < table.table_.size(); ++i) {
    table.table_[i] = {};
  }
  for (const auto & [key, layers] : j.items()) {
    auto tag = zone_tag_from_string(key);
    if (!tag) {
      throw ParseError("activation table: unknown situation \"" + key + "\"");
    }
    LayerActivation activation;
    if (!layers.is_array()) {
      throw ParseError("activation table: \"" + key + "\" must map to a layer list");
    }
    for (const auto & layer : layers) {
      const std::string name = layer.get<std::string>();
      if (name == "lane_own") {
        activation.lane_own = true;
      } else if (name == "lane_other") {
        activation.lane_other = true;
      } else if (name == "ego_path") {
        activation.ego_path = true;
      } else if (name == "object") {
        activation.object = true;
      } else {
        throw ParseError("activation table: unknown layer \"" + name + "\"");
      }
    }
    table.table_[static_cast<std::size_t>(*tag)] = activation;
  }
  return table;
}

ActivationTable ActivationTable::load(const std::filesystem::path & path)
{
  return from_json(detail::load_json_file(path));
}

bool detect_follow_drive(const MapModel & map, const Frame & frame)
{
  const LaneSegment * own = own_lane_at(map, frame.ego);
  if (own == nullptr) {
    return false;
  }
  const auto chain = lane_successors_transitive(map, *own, kOwnChainDepth);

  const Vec2 heading_dir{std::cos(frame.ego.heading), std::sin(frame.ego.heading)};
  const GroundTruthObject * candidate = nullptr;
  double candidate_tangent = 0.0;
  int candidates_in_window = 0;

  for (const auto & obj : frame.objects) {
    const Vec2 offset = obj.position - frame.ego.position;
    if (offset.dot(heading_dir) <= 0.0 || offset.norm() > kFollowRange) {
      continue;
    }
    double lateral = std::numeric_limits<double>::infinity();
    double tangent = 0.0;
    for (const LaneSegment * lane : chain) {
      const PolylinePoint proj = project_to_polyline(lane->centerline, obj.position);
      if (proj.distance < lateral) {
        lateral = proj.distance;
        tangent = proj.tangent_heading;
      }
    }
    if (lateral > kLaneMembershipLateral) {
      continue;
    }
    ++candidates_in_window;
    candidate = &obj;
    candidate_tangent = tangent;
  }

  if (candidates_in_window != 1) {
    return false;
  }
  // scalar speeds: a vector difference would penalize path curvature
  if (std::abs(candidate->velocity.norm() - frame.ego.speed) >= kFollowSpeedTolerance) {
    return false;
  }
  return angle_diff(heading_of(candidate->velocity), candidate_tangent) <
         deg_to_rad(kFollowHeadingTolerance);
}

Situation detect_situation(const MapModel & map, const Frame & frame)
{
  Situation situation;
  situation.location = zone_at(map, frame.ego.position);
  if (frame.annotations.contains(SubSituation::complex_intersection)) {
    situation.sub.insert(SubSituation::complex_intersection);
  }
  if (detect_follow_drive(map, frame)) {
    situation.sub.insert(SubSituation::follow_drive);
  }
  return situation;
}

LayerActivation active_layers(const Situation & situation, const ActivationTable & table)
{
  return table.for_location(situation.location);
}

}  // namespace awarekit
