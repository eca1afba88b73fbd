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

#include <nlohmann/json.hpp>

#include <algorithm>
#include <set>

#include "awarekit/errors.hpp"
#include "json_util.hpp"

namespace awarekit
{

namespace
{

constexpr std::size_t kBruteForceModuleLimit = 12;
constexpr std::size_t kSourceCombinationLimit = 16;

struct ResolvedSet
{
  std::vector<const ModuleDescriptor *> sources;
  std::vector<const ModuleDescriptor *> non_sources;
};

ResolvedSet resolve(const ModuleRegistry & registry, const std::vector<std::string> & ids)
{
  ResolvedSet set;
  for (const auto & id : ids) {
    const ModuleDescriptor & m = registry.at(id);
    (m.is_source() ? set.sources : set.non_sources).push_back(&m);
  }
  return set;
}

bool requires_met(
  const ModuleDescriptor & module, const std::vector<const ModuleDescriptor *> & admitted)
{
  for (const auto & [category, min_count] : module.relations.requires_category) {
    const auto count = std::count_if(
      admitted.begin(), admitted.end(),
      [&](const ModuleDescriptor * m) { return m->category == category; });
    if (count < min_count) {
      return false;
    }
  }
  return true;
}

/// Provided performance of the member set at one segment center angle.
double provided_at(
  const ResolvedSet & set, double center_deg, const Situation & situation, AggregationMode mode)
{
  double source_cap = 0.0;
  double total = 0.0;
  for (const ModuleDescriptor * m : set.sources) {
    if (m->coverage.covers_angle(center_deg)) {
      const double p = performance_for(*m, situation);
      total += p;
      source_cap = std::max(source_cap, p);
    }
  }
  for (const ModuleDescriptor * m : set.non_sources) {
    if (m->coverage.covers_angle(center_deg)) {
      const double p = performance_for(*m, situation);
      total += mode == AggregationMode::source_capped ? std::min(p, source_cap) : p;
    }
  }
  return total;
}

bool performance_feasible(
  const ResolvedSet & set, const PolarRequirementMap & polar_req, const Situation & situation,
  AggregationMode mode)
{
  for (int k = 0; k < 360; ++k) {
    const PolarSegment & seg = polar_req.segments[k];
    if (seg.p_req > 0.0 && provided_at(set, k + 0.5, situation, mode) < seg.p_req) {
      return false;
    }
  }
  return true;
}

bool coverage_ok(const ResolvedSet & set, const PolarRequirementMap & polar_req)
{
  auto members_cover = [&](double angle, double range) {
    auto covers = [&](const ModuleDescriptor * m) { return m->coverage.covers(angle, range); };
    return std::any_of(set.sources.begin(), set.sources.end(), covers) ||
           std::any_of(set.non_sources.begin(), set.non_sources.end(), covers);
  };
  for (int k = 0; k < 360; ++k) {
    const PolarSegment & seg = polar_req.segments[k];
    if (seg.p_req > 0.0 && !members_cover(k + 0.5, seg.d_req)) {
      return false;
    }
  }
  return true;
}

double set_cost(
  const ModuleRegistry & registry, const std::vector<std::string> & ids,
  std::size_t relevant_region_count)
{
  double cost = 0.0;
  for (const auto & id : ids) {
    cost += cost_for(registry.at(id), relevant_region_count);
  }
  return cost;
}

bool all_valid_in(
  const ModuleRegistry & registry, const std::vector<std::string> & ids,
  const Situation & situation)
{
  return std::all_of(ids.begin(), ids.end(), [&](const std::string & id) {
    return registry.at(id).valid_in(situation);
  });
}

/// Total order on candidates: cost, then size, then id set.
bool better_than(
  double cost_a, const std::vector<std::string> & a, double cost_b,
  const std::vector<std::string> & b)
{
  if (cost_a != cost_b) {
    return cost_a < cost_b;
  }
  if (a.size() != b.size()) {
    return a.size() < b.size();
  }
  return a < b;
}

std::pair<std::string, int> category_pair_from_json(
  const nlohmann::json & j, const std::string & ctx)
{
  if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_number_integer()) {
    throw ParseError(ctx + ": expected [category, min_count]");
  }
  return {j[0].get<std::string>(), j[1].get<int>()};
}

ConstraintRule rule_from_json(const nlohmann::json & j)
{
  ConstraintRule rule;
  if (auto it = j.find("when"); it != j.end()) {
    if (it->contains("location")) {
      auto tag = zone_tag_from_string((*it)["location"].get<std::string>());
      if (!tag) {
        throw ParseError("constraint rule: unknown location");
      }
      rule.when_location = *tag;
    }
    if (it->contains("sub")) {
      auto sub = sub_situation_from_string((*it)["sub"].get<std::string>());
      if (!sub) {
        throw ParseError("constraint rule: unknown sub-situation");
      }
      rule.when_sub = *sub;
    }
  }
  if (auto it = j.find("require_category"); it != j.end()) {
    if (it->is_array() && !it->empty() && it->front().is_string()) {
      rule.constraints.require_category.push_back(category_pair_from_json(*it, "constraint rule"));
    } else {
      for (const auto & entry : *it) {
        rule.constraints.require_category.push_back(
          category_pair_from_json(entry, "constraint rule"));
      }
    }
  }
  if (auto it = j.find("require_modules"); it != j.end()) {
    rule.constraints.require_modules = it->get<std::vector<std::string>>();
  }
  if (auto it = j.find("forbid_modules"); it != j.end()) {
    rule.constraints.forbid_modules = it->get<std::vector<std::string>>();
  }
  for (const auto & required : rule.constraints.require_modules) {
    if (std::find(rule.constraints.forbid_modules.begin(), rule.constraints.forbid_modules.end(),
                  required) != rule.constraints.forbid_modules.end()) {
      throw ValidationError("constraint rule: module \"" + required + "\" both required and forbidden");
    }
  }
  return rule;
}

}  // namespace

const char * to_string(AggregationMode mode)
{
  return mode == AggregationMode::source_capped ? "capped" : "plain";
}

std::optional<AggregationMode> aggregation_mode_from_string(std::string_view name)
{
  if (name == "capped") return AggregationMode::source_capped;
  if (name == "plain") return AggregationMode::plain_additive;
  return std::nullopt;
}

bool DynamicConstraints::satisfied_by(
  const ModuleRegistry & registry, const std::vector<std::string> & ids) const
{
  for (const auto & [category, min_count] : require_category) {
    const auto count = std::count_if(ids.begin(), ids.end(), [&](const std::string & id) {
      return registry.at(id).category == category;
    });
    if (count < min_count) {
      return false;
    }
  }
  for (const auto & required : require_modules) {
    if (std::find(ids.begin(), ids.end(), required) == ids.end()) {
      return false;
    }
  }
  for (const auto & forbidden : forbid_modules) {
    if (std::find(ids.begin(), ids.end(), forbidden) != ids.end()) {
      return false;
    }
  }
  return true;
}

ConstraintRules default_constraint_rules()
{
  ConstraintRule rule;
  rule.when_sub = SubSituation::complex_intersection;
  rule.constraints.require_category = {{"object_detection", 2}};
  return {rule};
}

ConstraintRules constraint_rules_from_json(const nlohmann::json & j)
{
  ConstraintRules rules;
  if (j.is_object() && j.contains("rules")) {
    for (const auto & entry : j["rules"]) {
      rules.push_back(rule_from_json(entry));
    }
  } else if (j.is_array()) {
    for (const auto & entry : j) {
      rules.push_back(rule_from_json(entry));
    }
  } else {
    rules.push_back(rule_from_json(j));
  }
  return rules;
}

ConstraintRules load_constraint_rules(const std::filesystem::path & path)
{
  return constraint_rules_from_json(detail::load_json_file(path));
}

DynamicConstraints resolve_constraints(const ConstraintRules & rules, const Situation & situation)
{
  DynamicConstraints merged;
  for (const auto & rule : rules) {
    if (!rule.applies(situation)) {
      continue;
    }
    merged.require_category.insert(
      merged.require_category.end(), rule.constraints.require_category.begin(),
      rule.constraints.require_category.end());
    merged.require_modules.insert(
      merged.require_modules.end(), rule.constraints.require_modules.begin(),
      rule.constraints.require_modules.end());
    merged.forbid_modules.insert(
      merged.forbid_modules.end(), rule.constraints.forbid_modules.begin(),
      rule.constraints.forbid_modules.end());
  }
  return merged;
}

bool subset_constructible(const ModuleRegistry & registry, const std::vector<std::string> & ids)
{
  ResolvedSet set;
  for (const auto & id : ids) {
    const ModuleDescriptor * m = registry.find(id);
    if (m == nullptr) {
      return false;
    }
    (m->is_source() ? set.sources : set.non_sources).push_back(m);
  }
  if (set.sources.empty()) {
    return false;
  }
  // one functional slot per non-source category
  for (std::size_t i = 0; i < set.non_sources.size(); ++i) {
    for (std::size_t j = i + 1; j < set.non_sources.size(); ++j) {
      if (set.non_sources[i]->category == set.non_sources[j]->category) {
        return false;
      }
    }
  }
  std::vector<const ModuleDescriptor *> admitted = set.sources;
  std::vector<const ModuleDescriptor *> pending = set.non_sources;
  bool progress = true;
  while (progress && !pending.empty()) {
    progress = false;
    for (auto it = pending.begin(); it != pending.end();) {
      if (requires_met(**it, admitted)) {
        admitted.push_back(*it);
        it = pending.erase(it);
        progress = true;
      } else {
        ++it;
      }
    }
  }
  return pending.empty();
}

std::array<double, 360> aggregate_performance(
  const ModuleRegistry & registry, const std::vector<std::string> & ids,
  const Situation & situation, AggregationMode mode)
{
  const ResolvedSet set = resolve(registry, ids);
  std::array<double, 360> out{};
  for (int k = 0; k < 360; ++k) {
    out[k] = provided_at(set, k + 0.5, situation, mode);
  }
  return out;
}

bool check_coverage(
  const ModuleRegistry & registry, const std::vector<std::string> & ids,
  const PolarRequirementMap & polar_req)
{
  return coverage_ok(resolve(registry, ids), polar_req);
}

ConfigForest::ConfigForest(const ModuleRegistry & registry) : registry_(&registry)
{
  const auto sources = registry.sources();
  const auto non_sources = registry.non_sources();
  if (sources.size() > kSourceCombinationLimit) {
    throw Error("forest construction limited to 16 source modules");
  }

  std::set<std::vector<std::string>> seen;
  for (std::size_t mask = 1; mask < (std::size_t{1} << sources.size()); ++mask) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < sources.size(); ++i) {
      if (mask & (std::size_t{1} << i)) {
        ids.push_back(sources[i]->id);
      }
    }
    std::sort(ids.begin(), ids.end());
    if (seen.insert(ids).second) {
      nodes_.push_back({std::move(ids), -1, true, 0.0});
    }
  }
  root_count_ = nodes_.size();

  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    for (const ModuleDescriptor * m : non_sources) {
      const auto & current = nodes_[i].modules;
      if (std::find(current.begin(), current.end(), m->id) != current.end()) {
        continue;
      }
      const bool slot_taken = std::any_of(current.begin(), current.end(), [&](const auto & id) {
        const ModuleDescriptor & member = registry.at(id);
        return !member.is_source() && member.category == m->category;
      });
      if (slot_taken) {
        continue;
      }
      const ResolvedSet set = resolve(registry, current);
      std::vector<const ModuleDescriptor *> admitted = set.sources;
      admitted.insert(admitted.end(), set.non_sources.begin(), set.non_sources.end());
      if (!requires_met(*m, admitted)) {
        continue;
      }
      std::vector<std::string> child = current;
      child.push_back(m->id);
      std::sort(child.begin(), child.end());
      if (seen.insert(child).second) {
        nodes_.push_back({std::move(child), static_cast<int>(i), true, 0.0});
      }
    }
  }
}

void ConfigForest::update_for_situation(
  const Situation & situation, std::size_t relevant_region_count)
{
  for (ConfigNode & node : nodes_) {
    node.valid = all_valid_in(*registry_, node.modules, situation);
    node.cost = set_cost(*registry_, node.modules, relevant_region_count);
  }
}

void ConfigForest::apply_constraints(const DynamicConstraints & constraints)
{
  if (constraints.empty()) {
    return;
  }
  for (ConfigNode & node : nodes_) {
    if (node.valid && !constraints.satisfied_by(*registry_, node.modules)) {
      node.valid = false;
    }
  }
}

std::optional<Selection> ConfigForest::select_optimal(
  const PolarRequirementMap & polar_req, const Situation & situation, AggregationMode mode) const
{
  if (polar_req.empty()) {
    return Selection{{}, 0.0};
  }
  std::optional<Selection> result;
  for (const ConfigNode & node : nodes_) {
    if (!node.valid) {
      continue;
    }
    const ResolvedSet set = resolve(*registry_, node.modules);
    if (!coverage_ok(set, polar_req)) {
      continue;
    }
    if (!performance_feasible(set, polar_req, situation, mode)) {
      continue;
    }
    if (!result || better_than(node.cost, node.modules, result->cost, result->modules)) {
      result = Selection{node.modules, node.cost};
    }
  }
  return result;
}

std::optional<Selection> brute_force_optimal(
  const ModuleRegistry & registry, const PolarRequirementMap & polar_req,
  const Situation & situation, const DynamicConstraints & constraints, AggregationMode mode)
{
  if (registry.modules().size() > kBruteForceModuleLimit) {
    throw Error("brute_force_optimal: registry exceeds the 12-module guard");
  }
  if (polar_req.empty()) {
    return Selection{{}, 0.0};
  }
  const std::size_t region_count = static_cast<std::size_t>(polar_req.relevant_segment_count());

  std::vector<std::string> all_ids;
  for (const auto & m : registry.modules()) {
    all_ids.push_back(m.id);
  }
  std::sort(all_ids.begin(), all_ids.end());

  std::optional<Selection> result;
  const std::size_t n = all_ids.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) {
        ids.push_back(all_ids[i]);
      }
    }
    if (!subset_constructible(registry, ids)) {
      continue;
    }
    if (!all_valid_in(registry, ids, situation)) {
      continue;
    }
    if (!constraints.satisfied_by(registry, ids)) {
      continue;
    }
    const ResolvedSet set = resolve(registry, ids);
    if (!coverage_ok(set, polar_req)) {
      continue;
    }
    if (!performance_feasible(set, polar_req, situation, mode)) {
      continue;
    }
    const double cost = set_cost(registry, ids, region_count);
    if (!result || better_than(cost, ids, result->cost, result->modules)) {
      result = Selection{std::move(ids), cost};
    }
  }
  return result;
}

}  // namespace awarekit
