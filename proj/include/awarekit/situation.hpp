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

#ifndef AWAREKIT_SITUATION_HPP_
#define AWAREKIT_SITUATION_HPP_

#include <nlohmann/json_fwd.hpp>

#include <array>
#include <filesystem>
#include <set>

#include "awarekit/world_model.hpp"

namespace awarekit
{

/// High-level context: geographic location plus detected sub-situations.
struct Situation
{
  ZoneTag location{kDefaultZone};
  std::set<SubSituation> sub;

  bool has(SubSituation s) const { return sub.contains(s); }

  auto operator<=>(const Situation &) const = default;
};

struct LayerActivation
{
  bool lane_own{false};
  bool lane_other{false};
  bool ego_path{false};
  bool object{false};

  auto operator<=>(const LayerActivation &) const = default;

  int count() const
  {
    return static_cast<int>(lane_own) + static_cast<int>(lane_other) +
           static_cast<int>(ego_path) + static_cast<int>(object);
  }
};

/// Location -> active attention layers. Defaults to the built-in table
/// (highway: own lane + ego path; rural: + object; urban: all four) and can be
/// replaced from a JSON configuration mapping each location to a layer list.
class ActivationTable
{
public:
  ActivationTable();  // built-in defaults

  static ActivationTable from_json(const nlohmann::json & j);
  static ActivationTable load(const std::filesystem::path & path);

  const LayerActivation & for_location(ZoneTag location) const
  {
    return table_[static_cast<std::size_t>(location)];
  }

private:
  std::array<LayerActivation, 3> table_{};
};

/// True iff exactly one object sits in the ego's own lane ahead within 40 m
/// and that object moves with the lane (scalar speed within 2 m/s of the ego,
/// heading within 30 degrees of the local lane tangent).
bool detect_follow_drive(const MapModel & map, const Frame & frame);

/// Location from the zone lookup; complex_intersection iff annotated in the
/// frame; follow_drive iff detect_follow_drive holds.
Situation detect_situation(const MapModel & map, const Frame & frame);

/// Layer activation for the situation's location (sub-situations act through
/// dynamic optimizer constraints, never through layer activation).
LayerActivation active_layers(const Situation & situation, const ActivationTable & table = {});

}  // namespace awarekit

#endif  // AWAREKIT_SITUATION_HPP_
