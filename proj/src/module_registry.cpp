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

#include "awarekit/module_registry.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

#include "awarekit/errors.hpp"
#include "json_util.hpp"

namespace awarekit
{

namespace
{

using nlohmann::json;

constexpr std::array<ZoneTag, 3> kZones{ZoneTag::highway, ZoneTag::rural, ZoneTag::urban};

CostModel cost_model_from_json(const json & j, const std::string & ctx)
{
  CostModel model;
  const std::string form = detail::require_string(j, "form", ctx);
  if (form == "constant") {
    model.form = CostModel::Form::constant;
  } else if (form == "per_item") {
    model.form = CostModel::Form::per_item;
  } else {
    throw ParseError(ctx + ": unknown cost form \"" + form + "\"");
  }
  model.base = detail::require_number(j, "base", ctx);
  model.per_item = j.value("per_item", 0.0);
  if (model.base < 0.0 || model.per_item < 0.0) {
    throw ValidationError(ctx + ": cost parameters must be non-negative");
  }
  if (model.form == CostModel::Form::constant && model.per_item != 0.0) {
    throw ValidationError(ctx + ": constant cost model cannot carry a per_item rate");
  }
  return model;
}

json cost_model_to_json(const CostModel & model)
{
  json j;
  j["form"] = model.form == CostModel::Form::constant ? "constant" : "per_item";
  j["base"] = model.base;
  j["per_item"] = model.per_item;
  return j;
}

RelationSet relations_from_json(const json & j, const std::string & ctx)
{
  RelationSet relations;
  if (auto it = j.find("requires_category"); it != j.end()) {
    for (const auto & entry : *it) {
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() ||
          !entry[1].is_number_integer()) {
        throw ParseError(ctx + ": requires_category entries must be [category, min_count]");
      }
      relations.requires_category.emplace_back(entry[0].get<std::string>(), entry[1].get<int>());
    }
  }
  if (auto it = j.find("valid_only_in"); it != j.end()) {
    for (const auto & entry : *it) {
      SituationGate gate;
      if (entry.contains("location")) {
        auto tag = zone_tag_from_string(entry["location"].get<std::string>());
        if (!tag) {
          throw ParseError(ctx + ": unknown gate location");
        }
        gate.location = *tag;
      }
      if (entry.contains("sub")) {
        auto sub = sub_situation_from_string(entry["sub"].get<std::string>());
        if (!sub) {
          throw ParseError(ctx + ": unknown gate sub-situation");
        }
        gate.sub = *sub;
      }
      relations.valid_only_in.push_back(gate);
    }
  }
  relations.notes = j.value("notes", "");
  return relations;
}

json relations_to_json(const RelationSet & relations)
{
  json j = json::object();
  if (!relations.requires_category.empty()) {
    j["requires_category"] = json::array();
    for (const auto & [category, count] : relations.requires_category) {
      j["requires_category"].push_back({category, count});
    }
  }
  if (!relations.valid_only_in.empty()) {
    j["valid_only_in"] = json::array();
    for (const auto & gate : relations.valid_only_in) {
      json jg = json::object();
      if (gate.location) {
        jg["location"] = to_string(*gate.location);
      }
      if (gate.sub) {
        jg["sub"] = to_string(*gate.sub);
      }
      j["valid_only_in"].push_back(std::move(jg));
    }
  }
  if (!relations.notes.empty()) {
    j["notes"] = relations.notes;
  }
  return j;
}

ModuleDescriptor make_module(
  std::string id, std::string category, std::string variant, ModuleType type, double cost,
  std::array<double, 3> performance, RelationSet relations = {})
{
  ModuleDescriptor m;
  m.id = std::move(id);
  m.category = std::move(category);
  m.variant = std::move(variant);
  m.module_type = type;
  m.cost_model = {CostModel::Form::constant, cost, 0.0};
  m.performance = performance;
  m.relations = std::move(relations);
  return m;
}

}  // namespace

bool ModuleDescriptor::valid_in(const Situation & situation) const
{
  if (relations.valid_only_in.empty()) {
    return true;
  }
  return std::any_of(
    relations.valid_only_in.begin(), relations.valid_only_in.end(),
    [&](const SituationGate & gate) { return gate.matches(situation); });
}

double performance_for(const ModuleDescriptor & module, const Situation & situation)
{
  return module.performance[static_cast<std::size_t>(situation.location)];
}

double cost_for(const ModuleDescriptor & module, std::size_t relevant_region_count)
{
  if (module.cost_model.form == CostModel::Form::constant) {
    return module.cost_model.base;
  }
  return module.cost_model.base +
         module.cost_model.per_item * static_cast<double>(relevant_region_count);
}

void ModuleRegistry::register_module(ModuleDescriptor descriptor)
{
  if (find(descriptor.id) != nullptr) {
    throw ValidationError("duplicate module id \"" + descriptor.id + "\"");
  }
  if (descriptor.is_source() && !descriptor.relations.requires_category.empty()) {
    throw ValidationError(
      "source module \"" + descriptor.id + "\" cannot have required-input relations");
  }
  for (double p : descriptor.performance) {
    if (p < 0.0 || !std::isfinite(p)) {
      throw ValidationError("module \"" + descriptor.id + "\" has invalid performance values");
    }
  }
  modules_.push_back(std::move(descriptor));
}

void ModuleRegistry::validate_relations() const
{
  if (std::none_of(modules_.begin(), modules_.end(),
                   [](const ModuleDescriptor & m) { return m.is_source(); })) {
    throw ValidationError("registry has no source module");
  }
  for (const auto & module : modules_) {
    for (const auto & [category, count] : module.relations.requires_category) {
      const bool resolvable = std::any_of(
        modules_.begin(), modules_.end(),
        [&](const ModuleDescriptor & other) { return other.category == category; });
      if (!resolvable) {
        throw ValidationError(
          "module \"" + module.id + "\" requires unknown category \"" + category + "\"");
      }
      if (count < 1) {
        throw ValidationError("module \"" + module.id + "\" requires a count below 1");
      }
    }
  }
}

const ModuleDescriptor * ModuleRegistry::find(std::string_view id) const
{
  for (const auto & module : modules_) {
    if (module.id == id) {
      return &module;
    }
  }
  return nullptr;
}

const ModuleDescriptor & ModuleRegistry::at(std::string_view id) const
{
  if (const ModuleDescriptor * module = find(id)) {
    return *module;
  }
  throw Error("unknown module id \"" + std::string(id) + "\"");
}

std::vector<const ModuleDescriptor *> ModuleRegistry::sources() const
{
  std::vector<const ModuleDescriptor *> result;
  for (const auto & module : modules_) {
    if (module.is_source()) {
      result.push_back(&module);
    }
  }
  std::sort(result.begin(), result.end(),
            [](const auto * a, const auto * b) { return a->id < b->id; });
  return result;
}

std::vector<const ModuleDescriptor *> ModuleRegistry::non_sources() const
{
  std::vector<const ModuleDescriptor *> result;
  for (const auto & module : modules_) {
    if (!module.is_source()) {
      result.push_back(&module);
    }
  }
  std::sort(result.begin(), result.end(),
            [](const auto * a, const auto * b) { return a->id < b->id; });
  return result;
}

ModuleRegistry ModuleRegistry::from_json(const nlohmann::json & j)
{
  ModuleRegistry registry;
  for (const auto & jm : detail::require_field(j, "modules", "catalog")) {
    ModuleDescriptor m;
    m.id = detail::require_string(jm, "id", "module");
    const std::string ctx = "module \"" + m.id + "\"";
    m.category = detail::require_string(jm, "category", ctx);
    m.variant = jm.value("variant", "");
    const std::string type = detail::require_string(jm, "type", ctx);
    if (type == "source") {
      m.module_type = ModuleType::source;
    } else if (type == "non_source") {
      m.module_type = ModuleType::non_source;
    } else {
      throw ParseError(ctx + ": unknown module type \"" + type + "\"");
    }
    m.cost_model = cost_model_from_json(detail::require_field(jm, "cost", ctx), ctx);
    const auto & jp = detail::require_field(jm, "performance", ctx);
    for (ZoneTag zone : kZones) {
      m.performance[static_cast<std::size_t>(zone)] =
        detail::require_number(jp, to_string(zone), ctx);
    }
    if (auto it = jm.find("coverage"); it != jm.end()) {
      m.coverage.angle_start_deg = it->value("angle_start_deg", 0.0);
      m.coverage.angle_span_deg = it->value("angle_span_deg", 360.0);
      if (it->contains("range_m") && !(*it)["range_m"].is_null()) {
        m.coverage.range_m = (*it)["range_m"].get<double>();
      }
    }
    if (auto it = jm.find("relations"); it != jm.end()) {
      m.relations = relations_from_json(*it, ctx);
    }
    registry.register_module(std::move(m));
  }
  registry.validate_relations();
  return registry;
}

ModuleRegistry ModuleRegistry::load(const std::filesystem::path & path)
{
  return from_json(detail::load_json_file(path));
}

nlohmann::json ModuleRegistry::to_json() const
{
  json j;
  j["modules"] = json::array();
  for (const auto & m : modules_) {
    json jm;
    jm["id"] = m.id;
    jm["category"] = m.category;
    if (!m.variant.empty()) {
      jm["variant"] = m.variant;
    }
    jm["type"] = m.is_source() ? "source" : "non_source";
    jm["cost"] = cost_model_to_json(m.cost_model);
    jm["performance"] = {
      {"highway", m.performance[static_cast<std::size_t>(ZoneTag::highway)]},
      {"rural", m.performance[static_cast<std::size_t>(ZoneTag::rural)]},
      {"urban", m.performance[static_cast<std::size_t>(ZoneTag::urban)]}};
    if (!m.coverage.full()) {
      json jc;
      jc["angle_start_deg"] = m.coverage.angle_start_deg;
      jc["angle_span_deg"] = m.coverage.angle_span_deg;
      if (std::isfinite(m.coverage.range_m)) {
        jc["range_m"] = m.coverage.range_m;
      }
      jm["coverage"] = std::move(jc);
    }
    json jr = relations_to_json(m.relations);
    if (!jr.empty()) {
      jm["relations"] = std::move(jr);
    }
    j["modules"].push_back(std::move(jm));
  }
  return j;
}

ModuleRegistry default_catalog()
{
  ModuleRegistry registry;
  registry.register_module(make_module(
    "lidar_od", "object_detection", "", ModuleType::source, 1.0, {1.0, 1.0, 1.0}));
  {
    RelationSet relations;
    relations.notes = "low VRU performance";
    registry.register_module(make_module(
      "radar_od", "object_detection", "", ModuleType::source, 0.33, {1.0, 1.0, 0.5},
      std::move(relations)));
  }
  {
    RelationSet relations;
    relations.requires_category = {{"object_detection", 1}};
    registry.register_module(make_module(
      "tracking_a", "tracking", "A", ModuleType::non_source, 0.1, {1.0, 1.0, 1.0},
      std::move(relations)));
  }
  {
    RelationSet relations;
    relations.requires_category = {{"object_detection", 1}};
    relations.valid_only_in = {SituationGate{std::nullopt, SubSituation::follow_drive}};
    relations.notes = "longitudinal distance only";
    registry.register_module(make_module(
      "tracking_b", "tracking", "B", ModuleType::non_source, 0.05, {1.0, 0.1, 0.1},
      std::move(relations)));
  }
  {
    RelationSet relations;
    relations.requires_category = {{"tracking", 1}};
    registry.register_module(make_module(
      "plausib", "plausibilization", "", ModuleType::non_source, 0.05, {1.0, 1.0, 1.0},
      std::move(relations)));
  }
  registry.validate_relations();
  return registry;
}

}  // namespace awarekit
