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

#include "awarekit/attention_map.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "awarekit/errors.hpp"

namespace awarekit
{

namespace
{

constexpr double kStraightLineYawRate = 1e-4;  // rad/s

// boundary points round half-up, in x then y
int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

/// CTRV position at time t from the given start state and yaw rate.
Vec2 ctrv_position(const EgoState & ego, double yaw_rate, double t)
{
  if (std::abs(yaw_rate) < kStraightLineYawRate) {
    return ego.position + ego.speed * t * Vec2{std::cos(ego.heading), std::sin(ego.heading)};
  }
  const double ratio = ego.speed / yaw_rate;
  return ego.position + Vec2{ratio * (std::sin(ego.heading + yaw_rate * t) - std::sin(ego.heading)),
                             ratio * (std::cos(ego.heading) - std::cos(ego.heading + yaw_rate * t))};
}

void mark_polyline(LayerGrid & layer, const Polyline & line)
{
  const double step = 0.5 * layer.spec.resolution_m;
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    const Vec2 delta = line[i + 1] - line[i];
    const double length = delta.norm();
    const int n = std::max(1, static_cast<int>(std::ceil(length / step)));
    for (int k = 0; k <= n; ++k) {
      layer.mark(line[i] + (static_cast<double>(k) / n) * delta);
    }
  }
  if (line.size() == 1) {
    layer.mark(line.front());
  }
}

}  // namespace

std::optional<CellIndex> GridSpec::cell_at(const Vec2 & point) const
{
  const Vec2 offset = (point - origin) / resolution_m;
  const CellIndex c{half() + round_half_up(offset.x()), half() + round_half_up(offset.y())};
  if (!contains(c)) {
    return std::nullopt;
  }
  return c;
}

Vec2 GridSpec::cell_center(const CellIndex & c) const
{
  return origin + resolution_m * Vec2{static_cast<double>(c.x - half()),
                                      static_cast<double>(c.y - half())};
}

void LayerGrid::mark(const Vec2 & point)
{
  if (auto c = spec.cell_at(point)) {
    values(c->x, c->y) = 1.0;
  }
}

int PolarRequirementMap::relevant_segment_count() const
{
  return static_cast<int>(std::count_if(
    segments.begin(), segments.end(), [](const PolarSegment & s) { return s.p_req > 0.0; }));
}

double PolarRequirementMap::max_requirement() const
{
  double max_p = 0.0;
  for (const auto & s : segments) {
    max_p = std::max(max_p, s.p_req);
  }
  return max_p;
}

LayerGrid layer_lane(
  const MapModel & map, const EgoState & ego, bool include_own, bool include_other,
  const GridSpec & spec, int own_chain_depth)
{
  LayerGrid layer(spec);
  if (!include_own && !include_other) {
    return layer;
  }

  std::unordered_set<std::string> own_chain_ids;
  if (const LaneSegment * own = own_lane_at(map, ego)) {
    for (const LaneSegment * lane : lane_successors_transitive(map, *own, own_chain_depth)) {
      own_chain_ids.insert(lane->id);
    }
  }

  if (include_own) {
    for (const auto & id : own_chain_ids) {
      mark_polyline(layer, map.find_lane(id)->centerline);
    }
  }
  if (include_other) {
    for (const LaneSegment * lane : lanes_within_radius(map, spec.origin, spec.radius())) {
      if (!own_chain_ids.contains(lane->id)) {
        mark_polyline(layer, lane->centerline);
      }
    }
  }
  return layer;
}

LayerGrid layer_ego_path(
  const EgoState & ego, const GridSpec & spec, double horizon_s, double yaw_rate_sigma,
  int yaw_rate_samples, double step_s)
{
  LayerGrid layer(spec);
  const int steps = static_cast<int>(std::floor(horizon_s / step_s + 1e-9));
  for (int i = 0; i < yaw_rate_samples; ++i) {
    const double fraction =
      yaw_rate_samples > 1 ? static_cast<double>(i) / (yaw_rate_samples - 1) : 0.5;
    const double yaw_rate = ego.yaw_rate - yaw_rate_sigma + 2.0 * yaw_rate_sigma * fraction;
    for (int k = 0; k <= steps; ++k) {
      layer.mark(ctrv_position(ego, yaw_rate, k * step_s));
    }
  }
  return layer;
}

LayerGrid layer_object(
  const std::vector<Vec2> & detections, const GridSpec & spec, double range_threshold_m)
{
  LayerGrid layer(spec);
  for (const auto & det : detections) {
    if ((det - spec.origin).norm() <= range_threshold_m) {
      layer.mark(det);
    }
  }
  return layer;
}

LayerGrid dilate(const LayerGrid & layer, int kernel)
{
  if (kernel < 1 || kernel % 2 == 0) {
    throw ValidationError("dilation kernel must be odd and >= 1");
  }
  if (kernel == 1) {
    return layer;
  }
  const int reach = kernel / 2;
  const int n = layer.spec.size_cells;
  LayerGrid out(layer.spec);
  for (int x = 0; x < n; ++x) {
    const int x0 = std::max(0, x - reach);
    const int x1 = std::min(n - 1, x + reach);
    for (int y = 0; y < n; ++y) {
      const int y0 = std::max(0, y - reach);
      const int y1 = std::min(n - 1, y + reach);
      out.values(x, y) = layer.values.block(x0, y0, x1 - x0 + 1, y1 - y0 + 1).maxCoeff();
    }
  }
  return out;
}

AttentionGrid combine(
  const std::vector<LayerGrid> & layers, double theta_rel, const GridSpec & empty_spec)
{
  if (layers.empty()) {
    return AttentionGrid(empty_spec, theta_rel);
  }
  AttentionGrid grid(layers.front().spec, theta_rel);
  for (const auto & layer : layers) {
    if (!(layer.spec == grid.spec)) {
      throw ValidationError("combine: layers disagree on grid spec");
    }
    grid.values += layer.values;
  }
  return grid;
}

std::vector<CellIndex> relevant_cells(const AttentionGrid & grid)
{
  std::vector<CellIndex> cells;
  for (int x = 0; x < grid.spec.size_cells; ++x) {
    for (int y = 0; y < grid.spec.size_cells; ++y) {
      if (grid.values(x, y) > grid.theta_rel) {
        cells.push_back({x, y});
      }
    }
  }
  return cells;
}

PolarRequirementMap to_polar(const AttentionGrid & grid)
{
  PolarRequirementMap polar;
  const int half = grid.spec.half();
  const double res = grid.spec.resolution_m;
  for (int x = 0; x < grid.spec.size_cells; ++x) {
    for (int y = 0; y < grid.spec.size_cells; ++y) {
      const double value = grid.values(x, y);
      if (!(value > grid.theta_rel)) {
        continue;
      }
      const double dx = (x - half) * res;
      const double dy = (y - half) * res;
      const double distance = std::hypot(dx, dy);
      // the ego's own cell (dx = dy = 0) lands in segment 0 via atan2(0, 0) == 0
      double angle_deg = rad_to_deg(std::atan2(dy, dx));
      if (angle_deg < 0.0) {
        angle_deg += 360.0;
      }
      int segment = static_cast<int>(std::floor(angle_deg));
      if (segment >= 360) {
        segment = 0;
      }
      auto & s = polar.segments[segment];
      s.p_req = std::max(s.p_req, value);
      s.d_req = std::max(s.d_req, distance);
    }
  }
  return polar;
}

void write_grid_csv(std::ostream & out, const AttentionGrid & grid)
{
  const int n = grid.spec.size_cells;
  for (int y = n - 1; y >= 0; --y) {
    for (int x = 0; x < n; ++x) {
      if (x > 0) {
        out << ',';
      }
      out << static_cast<long>(std::llround(grid.values(x, y)));
    }
    out << '\n';
  }
}

void write_polar_csv(std::ostream & out, const PolarRequirementMap & polar)
{
  out << "segment,p_req,d_req\n";
  for (int k = 0; k < 360; ++k) {
    out << k << ',' << polar.segments[k].p_req << ',' << polar.segments[k].d_req << '\n';
  }
}

}  // namespace awarekit
