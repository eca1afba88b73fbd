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

#include "awarekit/pipeline_sim.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

namespace awarekit
{

namespace
{

constexpr double kVruDropProbability = 0.5;
constexpr double kTrackAssociationGate = 5.0;  // m

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start)
{
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

double longitudinal_distance(const Vec2 & point, const EgoState & ego)
{
  const Vec2 dir{std::cos(ego.heading), std::sin(ego.heading)};
  return (point - ego.position).dot(dir);
}

}  // namespace

const char * to_string(RunMode mode)
{
  return mode == RunMode::aware ? "aware" : "naive";
}

std::optional<RunMode> run_mode_from_string(std::string_view name)
{
  if (name == "aware") return RunMode::aware;
  if (name == "naive") return RunMode::naive;
  return std::nullopt;
}

DetectionOutcome mock_detect(
  const ModuleDescriptor & module, const Frame & frame, const AttentionGrid & mlam,
  const Situation & situation, std::mt19937_64 & rng, bool apply_filter)
{
  DetectionOutcome outcome;
  const double location_performance = performance_for(module, situation);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (const auto & obj : frame.objects) {
    const Vec2 offset = obj.position - mlam.spec.origin;
    double angle_deg = rad_to_deg(heading_of(offset));
    if (angle_deg < 0.0) {
      angle_deg += 360.0;
    }
    if (!module.coverage.covers(angle_deg, offset.norm())) {
      continue;
    }
    if (obj.category == ObjectCategory::vru && location_performance < 1.0 &&
        uniform(rng) < kVruDropProbability) {
      continue;
    }
    ++outcome.produced;
    if (apply_filter) {
      const auto cell = mlam.spec.cell_at(obj.position);
      if (!cell || !(mlam.at(*cell) > 0.0)) {
        continue;
      }
    }
    outcome.detections.push_back({obj.id, obj.position, module.id});
  }
  return outcome;
}

std::vector<Track> mock_track(
  const std::string & variant, const std::vector<MockDetection> & detections,
  const std::vector<Track> & prior, const EgoState & ego, int & next_track_id)
{
  std::vector<Track> tracks;
  if (variant == "B") {
    const MockDetection * lead = nullptr;
    double lead_distance = std::numeric_limits<double>::infinity();
    for (const auto & det : detections) {
      const double lon = longitudinal_distance(det.position, ego);
      if (lon > 0.0 && lon < lead_distance) {
        lead = &det;
        lead_distance = lon;
      }
    }
    if (lead != nullptr) {
      Track track;
      track.track_id = next_track_id;
      for (const Track & p : prior) {
        if (p.object_id == lead->object_id) {
          track.track_id = p.track_id;
          break;
        }
      }
      if (track.track_id == next_track_id) {
        ++next_track_id;
      }
      track.object_id = lead->object_id;
      track.position = lead->position;
      track.longitudinal_distance = lead_distance;
      tracks.push_back(std::move(track));
    }
    return tracks;
  }

  // variant A: nearest-neighbor association against prior tracks
  std::vector<bool> claimed(prior.size(), false);
  std::vector<std::string> seen_objects;
  for (const auto & det : detections) {
    if (std::find(seen_objects.begin(), seen_objects.end(), det.object_id) !=
        seen_objects.end()) {
      continue;  // several detectors reported the same object
    }
    seen_objects.push_back(det.object_id);
    int best_prior = -1;
    double best_distance = kTrackAssociationGate;
    for (std::size_t i = 0; i < prior.size(); ++i) {
      if (claimed[i]) {
        continue;
      }
      const double d = (prior[i].position - det.position).norm();
      if (d <= best_distance) {
        best_distance = d;
        best_prior = static_cast<int>(i);
      }
    }
    Track track;
    if (best_prior >= 0) {
      claimed[best_prior] = true;
      track.track_id = prior[best_prior].track_id;
    } else {
      track.track_id = next_track_id++;
    }
    track.object_id = det.object_id;
    track.position = det.position;
    track.longitudinal_distance = longitudinal_distance(det.position, ego);
    tracks.push_back(std::move(track));
  }
  std::sort(tracks.begin(), tracks.end(),
            [](const Track & a, const Track & b) { return a.track_id < b.track_id; });
  return tracks;
}

Simulator::Simulator(
  const MapModel & map, const ModuleRegistry & registry, SimulationOptions options)
: map_(&map),
  registry_(&registry),
  options_(std::move(options)),
  forest_(registry),
  naive_set_(naive_active_set(registry)),
  rng_(options_.seed)
{
}

std::vector<std::string> Simulator::naive_active_set(const ModuleRegistry & registry)
{
  std::vector<std::string> ids;
  for (const ModuleDescriptor * m : registry.sources()) {
    ids.push_back(m->id);
  }
  // one variant per non-source category: highest mean performance wins,
  // ties fall to lower cost, then id
  std::map<std::string, const ModuleDescriptor *> slot;
  for (const ModuleDescriptor * m : registry.non_sources()) {
    auto mean_perf = [](const ModuleDescriptor * d) {
      return std::accumulate(d->performance.begin(), d->performance.end(), 0.0) / 3.0;
    };
    auto it = slot.find(m->category);
    if (it == slot.end()) {
      slot[m->category] = m;
      continue;
    }
    const ModuleDescriptor * held = it->second;
    const double pm = mean_perf(m);
    const double ph = mean_perf(held);
    if (pm > ph || (pm == ph && m->cost_model.base < held->cost_model.base) ||
        (pm == ph && m->cost_model.base == held->cost_model.base && m->id < held->id)) {
      it->second = m;
    }
  }
  for (const auto & [category, m] : slot) {
    ids.push_back(m->id);
  }
  std::sort(ids.begin(), ids.end());

  // keep only the relation-constructible closure
  std::vector<std::string> admitted;
  for (const auto & id : ids) {
    if (registry.at(id).is_source()) {
      admitted.push_back(id);
    }
  }
  bool progress = true;
  while (progress) {
    progress = false;
    for (const auto & id : ids) {
      if (std::find(admitted.begin(), admitted.end(), id) != admitted.end()) {
        continue;
      }
      std::vector<std::string> trial = admitted;
      trial.push_back(id);
      std::sort(trial.begin(), trial.end());
      if (subset_constructible(registry, trial)) {
        admitted = std::move(trial);
        progress = true;
      }
    }
  }
  return admitted;
}

std::vector<Vec2> Simulator::preferred_prev_detections(const Situation & situation) const
{
  const ModuleDescriptor * best = nullptr;
  for (const auto & id : prev_active_detectors_) {
    const ModuleDescriptor & m = registry_->at(id);
    if (best == nullptr) {
      best = &m;
      continue;
    }
    const double pm = performance_for(m, situation);
    const double pb = performance_for(*best, situation);
    if (pm > pb || (pm == pb && m.cost_model.base > best->cost_model.base) ||
        (pm == pb && m.cost_model.base == best->cost_model.base && m.id < best->id)) {
      best = &m;
    }
  }
  std::vector<Vec2> positions;
  if (best == nullptr) {
    return positions;
  }
  if (auto it = prev_detections_.find(best->id); it != prev_detections_.end()) {
    for (const auto & det : it->second) {
      positions.push_back(det.position);
    }
  }
  return positions;
}

CycleResult Simulator::run_cycle(const Frame & frame)
{
  CycleResult result;
  result.timestamp = frame.timestamp;

  GridSpec spec = options_.grid;
  spec.origin = frame.ego.position;

  const auto overhead_start = Clock::now();
  const Situation situation = detect_situation(*map_, frame);
  result.situation = situation;

  AttentionGrid mlam(spec);
  PolarRequirementMap polar;
  DynamicConstraints constraints;
  std::optional<Selection> selection;

  if (options_.mode == RunMode::naive) {
    mlam.values.setOnes();
    polar = to_polar(mlam);
    selection = Selection{
      naive_set_, [&] {
        double cost = 0.0;
        for (const auto & id : naive_set_) {
          cost += cost_for(registry_->at(id), static_cast<std::size_t>(polar.relevant_segment_count()));
        }
        return cost;
      }()};
  } else {
    const LayerActivation activation = active_layers(situation, options_.activation);
    std::vector<LayerGrid> layers;
    if (activation.lane_own || activation.lane_other) {
      layers.push_back(
        dilate(layer_lane(*map_, frame.ego, activation.lane_own, activation.lane_other, spec)));
    }
    if (activation.ego_path) {
      layers.push_back(dilate(layer_ego_path(frame.ego, spec)));
    }
    if (activation.object) {
      layers.push_back(dilate(layer_object(preferred_prev_detections(situation), spec)));
    }
    mlam = combine(layers, 0.0, spec);
    polar = to_polar(mlam);

    forest_.update_for_situation(situation, static_cast<std::size_t>(polar.relevant_segment_count()));
    constraints = resolve_constraints(options_.constraint_rules, situation);
    forest_.apply_constraints(constraints);
    selection = forest_.select_optimal(polar, situation, options_.aggregation);
    result.overhead_ms = elapsed_ms(overhead_start);
  }

  if (observer_) {
    observer_(CycleTrace{cycle_index_, situation, constraints, mlam, polar, selection});
  }

  if (selection) {
    result.active_modules = selection->modules;
    prev_selection_ = selection->modules;
  } else {
    result.degraded = true;
    result.active_modules = prev_selection_;
  }

  // mock module execution; the MLAM gates data only in aware mode
  const bool apply_filter = options_.mode == RunMode::aware;
  std::map<std::string, std::vector<MockDetection>> detections_by_module;
  std::vector<std::string> active_detectors;
  std::vector<MockDetection> all_detections;
  const ModuleDescriptor * tracker = nullptr;

  for (const auto & id : result.active_modules) {
    const ModuleDescriptor & module = registry_->at(id);
    if (module.category == "object_detection") {
      DetectionOutcome outcome =
        mock_detect(module, frame, mlam, situation, rng_, apply_filter);
      result.counts.detections_emitted += outcome.produced;
      result.counts.detections_filtered +=
        outcome.produced - static_cast<int>(outcome.detections.size());
      all_detections.insert(
        all_detections.end(), outcome.detections.begin(), outcome.detections.end());
      detections_by_module[id] = std::move(outcome.detections);
      active_detectors.push_back(id);
    } else if (module.category == "tracking") {
      tracker = &module;
    }
  }

  if (tracker != nullptr) {
    tracks_ = mock_track(tracker->variant, all_detections, tracks_, frame.ego, next_track_id_);
  } else {
    tracks_.clear();
  }
  result.counts.tracks = static_cast<int>(tracks_.size());

  for (const auto & id : result.active_modules) {
    const ModuleDescriptor & module = registry_->at(id);
    std::size_t processed = 0;
    if (module.category == "object_detection") {
      processed = detections_by_module[id].size();
    } else if (module.category == "tracking") {
      processed = all_detections.size();
    } else {
      processed = tracks_.size();
    }
    result.module_costs[id] = cost_for(module, processed);
  }

  prev_detections_ = std::move(detections_by_module);
  prev_active_detectors_ = std::move(active_detectors);
  ++cycle_index_;
  return result;
}

RunResult run_scenario(
  const MapModel & map, const ModuleRegistry & registry, const Scenario & scenario,
  const SimulationOptions & options, CycleObserver observer)
{
  Simulator sim(map, registry, options);
  sim.set_observer(std::move(observer));
  RunResult result;
  result.cycles.reserve(scenario.frames.size());
  for (const Frame & frame : scenario.frames) {
    result.cycles.push_back(sim.run_cycle(frame));
  }
  result.metrics = compute_metrics(result.cycles, registry);
  return result;
}

RunMetrics compute_metrics(
  const std::vector<CycleResult> & cycles, const ModuleRegistry & registry)
{
  RunMetrics metrics;
  metrics.frames = static_cast<int>(cycles.size());
  for (const auto & module : registry.modules()) {
    metrics.uptime[module.id] = 0.0;
  }
  std::map<std::string, int> location_cycles;
  std::map<std::string, int> location_active;
  for (const CycleResult & cycle : cycles) {
    for (const auto & id : cycle.active_modules) {
      metrics.uptime[id] += 1.0;
    }
    const std::string location = to_string(cycle.situation.location);
    location_cycles[location] += 1;
    location_active[location] += static_cast<int>(cycle.active_modules.size());
    for (const auto & [id, cost] : cycle.module_costs) {
      metrics.accumulated_cost += cost;
    }
    metrics.overhead.total_ms += cycle.overhead_ms;
    metrics.overhead.max_ms = std::max(metrics.overhead.max_ms, cycle.overhead_ms);
    metrics.degraded_cycles += cycle.degraded ? 1 : 0;
  }
  if (metrics.frames > 0) {
    for (auto & [id, count] : metrics.uptime) {
      count /= metrics.frames;
    }
    metrics.overhead.mean_ms = metrics.overhead.total_ms / metrics.frames;
  }
  for (const auto & [location, count] : location_cycles) {
    metrics.avg_active_modules[location] =
      static_cast<double>(location_active[location]) / count;
  }

  double naive_cycle_cost = 0.0;
  for (const auto & id : Simulator::naive_active_set(registry)) {
    naive_cycle_cost += cost_for(registry.at(id), 0);
  }
  metrics.naive_reference_cost = metrics.frames * naive_cycle_cost;
  metrics.cost_ratio = metrics.naive_reference_cost > 0.0
                         ? metrics.accumulated_cost / metrics.naive_reference_cost
                         : 0.0;
  return metrics;
}

nlohmann::json cycle_to_json(const CycleResult & cycle)
{
  nlohmann::json j;
  j["schema"] = 1;
  j["t"] = cycle.timestamp;
  nlohmann::json sub = nlohmann::json::array();
  for (const auto & s : cycle.situation.sub) {
    sub.push_back(to_string(s));
  }
  j["situation"] = {{"location", to_string(cycle.situation.location)}, {"sub", std::move(sub)}};
  j["active"] = cycle.active_modules;
  j["module_costs"] = cycle.module_costs;
  j["counts"] = {{"detections_emitted", cycle.counts.detections_emitted},
                 {"detections_filtered", cycle.counts.detections_filtered},
                 {"tracks", cycle.counts.tracks}};
  j["degraded"] = cycle.degraded;
  return j;
}

nlohmann::json metrics_to_json(const RunMetrics & metrics, RunMode mode)
{
  nlohmann::json j;
  j["schema"] = 1;
  j["mode"] = to_string(mode);
  j["frames"] = metrics.frames;
  j["uptime"] = metrics.uptime;
  j["avg_active_modules"] = metrics.avg_active_modules;
  j["accumulated_cost"] = metrics.accumulated_cost;
  j["naive_reference_cost"] = metrics.naive_reference_cost;
  j["cost_ratio"] = metrics.cost_ratio;
  j["overhead_ms"] = {{"total", metrics.overhead.total_ms},
                      {"mean", metrics.overhead.mean_ms},
                      {"max", metrics.overhead.max_ms}};
  j["degraded_cycles"] = metrics.degraded_cycles;
  return j;
}

}  // namespace awarekit
