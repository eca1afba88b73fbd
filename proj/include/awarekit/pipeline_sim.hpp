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

#ifndef AWAREKIT_PIPELINE_SIM_HPP_
#define AWAREKIT_PIPELINE_SIM_HPP_

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "awarekit/attention_map.hpp"
#include "awarekit/config_optimizer.hpp"
#include "awarekit/module_registry.hpp"
#include "awarekit/situation.hpp"
#include "awarekit/world_model.hpp"

namespace awarekit
{

struct MockDetection
{
  std::string object_id;
  Vec2 position{0.0, 0.0};
  std::string source_module;
};

struct Track
{
  int track_id{0};
  std::string object_id;
  Vec2 position{0.0, 0.0};
  double longitudinal_distance{0.0};  // along the ego heading, meters
};

struct CycleCounts
{
  int detections_emitted{0};   // produced by active detectors before the MLAM gate
  int detections_filtered{0};  // removed by the binary gate, <= emitted
  int tracks{0};
};

struct CycleResult
{
  double timestamp{0.0};
  Situation situation;
  std::vector<std::string> active_modules;     // sorted ids
  std::map<std::string, double> module_costs;  // active modules only; inactive cost 0
  CycleCounts counts;
  double overhead_ms{0.0};  // measured awareness processing, 0 in naive mode
  bool degraded{false};     // no feasible configuration; previous one held
};

struct OverheadStats
{
  double total_ms{0.0};
  double mean_ms{0.0};
  double max_ms{0.0};
};

struct RunMetrics
{
  int frames{0};
  std::map<std::string, double> uptime;              // per catalog module, fraction of cycles
  std::map<std::string, double> avg_active_modules;  // per situation location
  double accumulated_cost{0.0};
  double naive_reference_cost{0.0};  // frames x naive-set base cost
  double cost_ratio{0.0};            // accumulated / naive reference
  OverheadStats overhead;
  int degraded_cycles{0};
};

enum class RunMode { aware, naive };

const char * to_string(RunMode mode);
std::optional<RunMode> run_mode_from_string(std::string_view name);

struct SimulationOptions
{
  GridSpec grid{};  // origin is recentered on the ego every frame
  RunMode mode{RunMode::aware};
  AggregationMode aggregation{AggregationMode::source_capped};
  std::uint64_t seed{0};
  ActivationTable activation{};
  ConstraintRules constraint_rules{default_constraint_rules()};
};

/// Per-cycle snapshot handed to an observer before the cycle result is
/// finalized; used for grid dumps and offline verification.
struct CycleTrace
{
  int index{0};
  const Situation & situation;
  const DynamicConstraints & constraints;
  const AttentionGrid & mlam;
  const PolarRequirementMap & polar;
  const std::optional<Selection> & selection;  // nullopt = infeasible this cycle
};

using CycleObserver = std::function<void(const CycleTrace &)>;

struct DetectionOutcome
{
  std::vector<MockDetection> detections;  // survivors of the binary filter
  int produced{0};                        // in-FoV detections the module emitted
};

/// Emits one detection per ground-truth object inside the module's field of
/// view. With apply_filter the MLAM acts as a binary gate: only objects on
/// cells with p_req > 0 pass. Detectors whose performance at the current
/// location is below 1 drop VRU objects with probability 0.5 (seeded rng).
DetectionOutcome mock_detect(
  const ModuleDescriptor & module, const Frame & frame, const AttentionGrid & mlam,
  const Situation & situation, std::mt19937_64 & rng, bool apply_filter);

/// Variant "B" keeps only the nearest detection ahead of the ego
/// (longitudinal distance); any other variant associates every detection to
/// the nearest prior track within a 5 m gate, assigning fresh ids otherwise.
std::vector<Track> mock_track(
  const std::string & variant, const std::vector<MockDetection> & detections,
  const std::vector<Track> & prior, const EgoState & ego, int & next_track_id);

/// Runs the per-frame awareness cycle: situation detection, MLAM build,
/// forest update, configuration, and mock module execution with the MLAM as
/// an intra-module binary filter. Naive mode skips awareness processing,
/// marks every cell relevant, and keeps the baseline set active.
class Simulator
{
public:
  Simulator(const MapModel & map, const ModuleRegistry & registry, SimulationOptions options = {});

  CycleResult run_cycle(const Frame & frame);

  void set_observer(CycleObserver observer) { observer_ = std::move(observer); }

  const ConfigForest & forest() const { return forest_; }

  /// Baseline set: every source plus one non-source per category (the variant
  /// with the highest mean performance, ties by lower cost then id), reduced
  /// to the relation-constructible closure.
  static std::vector<std::string> naive_active_set(const ModuleRegistry & registry);

private:
  std::vector<Vec2> preferred_prev_detections(const Situation & situation) const;

  const MapModel * map_;
  const ModuleRegistry * registry_;
  SimulationOptions options_;
  ConfigForest forest_;
  std::vector<std::string> naive_set_;
  std::vector<std::string> prev_selection_;  // degradation hold
  std::map<std::string, std::vector<MockDetection>> prev_detections_;
  std::vector<std::string> prev_active_detectors_;
  std::vector<Track> tracks_;
  std::mt19937_64 rng_;
  int next_track_id_{0};
  int cycle_index_{0};
  CycleObserver observer_;
};

struct RunResult
{
  RunMetrics metrics;
  std::vector<CycleResult> cycles;
};

RunResult run_scenario(
  const MapModel & map, const ModuleRegistry & registry, const Scenario & scenario,
  const SimulationOptions & options = {}, CycleObserver observer = {});

/// Single aggregation path: all summary numbers derive from the cycle list.
RunMetrics compute_metrics(
  const std::vector<CycleResult> & cycles, const ModuleRegistry & registry);

nlohmann::json cycle_to_json(const CycleResult & cycle);
nlohmann::json metrics_to_json(const RunMetrics & metrics, RunMode mode);

}  // namespace awarekit

#endif  // AWAREKIT_PIPELINE_SIM_HPP_
