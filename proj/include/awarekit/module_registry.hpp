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

#ifndef AWAREKIT_MODULE_REGISTRY_HPP_
#define AWAREKIT_MODULE_REGISTRY_HPP_

#include <nlohmann/json_fwd.hpp>

#include <array>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "awarekit/situation.hpp"

namespace awarekit
{

enum class ModuleType { source, non_source };

/// Polar field of view around the ego; defaults to the full circle with
/// unbounded range.
struct PolarFov
{
  double angle_start_deg{0.0};
  double angle_span_deg{360.0};
  double range_m{std::numeric_limits<double>::infinity()};

  bool full() const
  {
    return angle_span_deg >= 360.0 && std::isinf(range_m);
  }

  /// Angular containment of the half-open span [start, start + span).
  bool covers_angle(double angle_deg) const
  {
    return angle_in_span_deg(angle_deg, angle_start_deg, angle_span_deg);
  }

  bool covers(double angle_deg, double range) const
  {
    return covers_angle(angle_deg) && range <= range_m;
  }

  bool operator==(const PolarFov & other) const
  {
    return angle_start_deg == other.angle_start_deg && angle_span_deg == other.angle_span_deg &&
           range_m == other.range_m;
  }
};

struct CostModel
{
  enum class Form { constant, per_item };

  Form form{Form::constant};
  double base{0.0};
  double per_item{0.0};  // cost units per processed datum, 0 for constant

  bool operator==(const CostModel &) const = default;
};

/// One clause of a valid_only_in gate; empty fields match anything.
struct SituationGate
{
  std::optional<ZoneTag> location;
  std::optional<SubSituation> sub;

  bool matches(const Situation & situation) const
  {
    if (location && *location != situation.location) {
      return false;
    }
    if (sub && !situation.has(*sub)) {
      return false;
    }
    return true;
  }

  bool operator==(const SituationGate &) const = default;
};

struct RelationSet
{
  std::vector<std::pair<std::string, int>> requires_category;  // (category, min count)
  std::vector<SituationGate> valid_only_in;  // empty = valid in every situation
  std::string notes;

  bool operator==(const RelationSet &) const = default;
};

struct ModuleDescriptor
{
  std::string id;
  std::string category;  // e.g. object_detection, tracking, plausibilization
  std::string variant;   // variant label within the category, may be empty
  ModuleType module_type{ModuleType::source};
  PolarFov coverage{};
  std::array<double, 3> performance{};  // indexed by ZoneTag, uniform over coverage
  CostModel cost_model{};
  RelationSet relations{};

  bool is_source() const { return module_type == ModuleType::source; }

  /// True iff every valid_only_in gate admits the situation (or none exist).
  bool valid_in(const Situation & situation) const;

  bool operator==(const ModuleDescriptor &) const = default;
};

/// Provided performance of the module for the situation's location.
double performance_for(const ModuleDescriptor & module, const Situation & situation);

/// base + per_item * count; constant models ignore the count.
double cost_for(const ModuleDescriptor & module, std::size_t relevant_region_count);

/// Catalog of perception modules. Immutable once validated; registration
/// order is preserved but queries sort by id.
class ModuleRegistry
{
public:
  /// Stores the descriptor; throws ValidationError on duplicate id or a
  /// source module carrying required-input relations.
  void register_module(ModuleDescriptor descriptor);

  /// Checks that every requires_category resolves to some registered module
  /// and that at least one source module exists.
  void validate_relations() const;

  const ModuleDescriptor * find(std::string_view id) const;
  const ModuleDescriptor & at(std::string_view id) const;  // throws on unknown id

  const std::vector<ModuleDescriptor> & modules() const { return modules_; }

  std::vector<const ModuleDescriptor *> sources() const;
  std::vector<const ModuleDescriptor *> non_sources() const;

  static ModuleRegistry from_json(const nlohmann::json & j);
  static ModuleRegistry load(const std::filesystem::path & path);
  nlohmann::json to_json() const;

  bool operator==(const ModuleRegistry &) const = default;

private:
  std::vector<ModuleDescriptor> modules_;
};

/// The bundled default catalog: lidar/radar object detection, tracking
/// variants A and B, and plausibilization with their costs, per-location
/// performance values, and relations.
ModuleRegistry default_catalog();

}  // namespace awarekit

#endif  // AWAREKIT_MODULE_REGISTRY_HPP_
