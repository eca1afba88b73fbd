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

#ifndef AWAREKIT_CONFIG_OPTIMIZER_HPP_
#define AWAREKIT_CONFIG_OPTIMIZER_HPP_

#include <nlohmann/json_fwd.hpp>

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "awarekit/attention_map.hpp"
#include "awarekit/module_registry.hpp"

namespace awarekit
{

/// How a candidate's provided performance folds over its members.
/// source_capped: sources add up; every non-source contributes
/// min(own performance, best covering source performance). plain_additive:
/// the literal sum over all members.
enum class AggregationMode { source_capped, plain_additive };

const char * to_string(AggregationMode mode);
std::optional<AggregationMode> aggregation_mode_from_string(std::string_view name);

/// Runtime white/blacklists narrowing the search.
struct DynamicConstraints
{
  std::vector<std::pair<std::string, int>> require_category;  // (category, min count)
  std::vector<std::string> require_modules;                   // ids that must be present
  std::vector<std::string> forbid_modules;                    // ids that must be absent

  bool empty() const
  {
    return require_category.empty() && require_modules.empty() && forbid_modules.empty();
  }

  bool satisfied_by(const ModuleRegistry & registry, const std::vector<std::string> & ids) const;

  bool operator==(const DynamicConstraints &) const = default;
};

/// A situation-gated constraint clause; all matching clauses merge.
struct ConstraintRule
{
  std::optional<ZoneTag> when_location;
  std::optional<SubSituation> when_sub;
  DynamicConstraints constraints;

  bool applies(const Situation & situation) const
  {
    if (when_location && *when_location != situation.location) {
      return false;
    }
    if (when_sub && !situation.has(*when_sub)) {
      return false;
    }
    return true;
  }
};

using ConstraintRules = std::vector<ConstraintRule>;

/// The built-in rule set: a complex intersection requires two
/// object-detection modules.
ConstraintRules default_constraint_rules();

ConstraintRules constraint_rules_from_json(const nlohmann::json & j);
ConstraintRules load_constraint_rules(const std::filesystem::path & path);

/// Union of all rules applying to the situation.
DynamicConstraints resolve_constraints(const ConstraintRules & rules, const Situation & situation);

/// One configuration candidate: the full module set on the path from its root.
struct ConfigNode
{
  std::vector<std::string> modules;  // sorted ids, duplicate-free
  int parent{-1};                    // -1 for roots
  bool valid{true};
  double cost{0.0};                  // sum of member costs, id order
};

struct Selection
{
  std::vector<std::string> modules;  // sorted ids; empty = empty configuration
  double cost{0.0};

  bool operator==(const Selection &) const = default;
};

/// True iff the module set is buildable by the forest expansion: it contains a
/// source, holds at most one non-source per category, and every non-source's
/// requires_category counts are met by previously admitted members.
bool subset_constructible(const ModuleRegistry & registry, const std::vector<std::string> & ids);

/// Provided performance per 1-degree polar segment for a module set
/// (angular coverage only; range feasibility is the coverage check).
std::array<double, 360> aggregate_performance(
  const ModuleRegistry & registry, const std::vector<std::string> & ids,
  const Situation & situation, AggregationMode mode);

/// Every required segment (p_req > 0) must sit inside some member field of
/// view whose range reaches the segment's distance requirement.
bool check_coverage(
  const ModuleRegistry & registry, const std::vector<std::string> & ids,
  const PolarRequirementMap & polar_req);

/// All valid module combinations, rooted at the nonempty source-module
/// subsets, expanded with eligible non-source modules, duplicates pruned.
class ConfigForest
{
public:
  explicit ConfigForest(const ModuleRegistry & registry);

  const std::vector<ConfigNode> & nodes() const { return nodes_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t root_count() const { return root_count_; }
  const ModuleRegistry & registry() const { return *registry_; }

  /// Recomputes validity gates and member costs for the situation. The
  /// relevant_region_count prices per-item cost models; the canonical count is
  /// the number of polar segments with p_req > 0.
  void update_for_situation(const Situation & situation, std::size_t relevant_region_count = 0);

  /// Marks nodes violating the white/blacklists invalid. Cleared by the next
  /// update_for_situation.
  void apply_constraints(const DynamicConstraints & constraints);

  /// Minimum-cost valid node passing coverage and per-segment performance.
  /// Ties break toward fewer modules, then the lexicographically smallest id
  /// set. An all-zero requirement selects the empty configuration; nullopt
  /// signals infeasibility (degradation is the caller's concern).
  std::optional<Selection> select_optimal(
    const PolarRequirementMap & polar_req, const Situation & situation,
    AggregationMode mode = AggregationMode::source_capped) const;

private:
  const ModuleRegistry * registry_;
  std::vector<ConfigNode> nodes_;
  std::size_t root_count_{0};
};

/// Exhaustive reference search over the whole powerset with identical
/// validity, aggregation, and tie-break rules. Guarded to at most 12 modules.
std::optional<Selection> brute_force_optimal(
  const ModuleRegistry & registry, const PolarRequirementMap & polar_req,
  const Situation & situation, const DynamicConstraints & constraints,
  AggregationMode mode = AggregationMode::source_capped);

}  // namespace awarekit

#endif  // AWAREKIT_CONFIG_OPTIMIZER_HPP_
