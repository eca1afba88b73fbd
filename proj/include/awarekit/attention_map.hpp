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

#ifndef AWAREKIT_ATTENTION_MAP_HPP_
#define AWAREKIT_ATTENTION_MAP_HPP_

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <ostream>
#include <vector>

#include "awarekit/geometry.hpp"
#include "awarekit/world_model.hpp"

namespace awarekit
{

struct CellIndex
{
  int x{0};
  int y{0};

  auto operator<=>(const CellIndex &) const = default;
};

/// Square ego-centered Cartesian grid. The ego sits at the center cell and the
/// grid axes stay aligned to the world axes; a point belongs to the cell whose
/// center is nearest, boundaries rounding half-up in x then y.
struct GridSpec
{
  int size_cells{151};      // odd
  double resolution_m{1.0};  // meters per cell
  Vec2 origin{0.0, 0.0};     // ego position; equals the center cell's center

  int half() const { return size_cells / 2; }

  /// Circumscribed radius of the grid square around the ego.
  double radius() const
  {
    return (half() + 0.5) * resolution_m * std::numbers::sqrt2;
  }

  bool contains(const CellIndex & c) const
  {
    return c.x >= 0 && c.x < size_cells && c.y >= 0 && c.y < size_cells;
  }

  std::optional<CellIndex> cell_at(const Vec2 & point) const;
  Vec2 cell_center(const CellIndex & c) const;

  bool operator==(const GridSpec & other) const
  {
    return size_cells == other.size_cells && resolution_m == other.resolution_m &&
           origin.x() == other.origin.x() && origin.y() == other.origin.y();
  }
};

/// One attention layer: binary relevance per cell before combination.
struct LayerGrid
{
  GridSpec spec;
  Eigen::ArrayXXd values;  // indexed (x, y), all >= 0

  LayerGrid() : values(Eigen::ArrayXXd::Zero(spec.size_cells, spec.size_cells)) {}
  explicit LayerGrid(const GridSpec & s)
  : spec(s), values(Eigen::ArrayXXd::Zero(s.size_cells, s.size_cells))
  {
  }

  double & at(const CellIndex & c) { return values(c.x, c.y); }
  double at(const CellIndex & c) const { return values(c.x, c.y); }

  void mark(const Vec2 & point);  // sets the containing cell to 1 if inside the grid
};

/// The combined multi-layer attention map: per-cell summed relevance.
struct AttentionGrid
{
  GridSpec spec;
  Eigen::ArrayXXd values;
  double theta_rel{0.0};  // cells with value strictly above this are relevant

  AttentionGrid() : values(Eigen::ArrayXXd::Zero(spec.size_cells, spec.size_cells)) {}
  explicit AttentionGrid(const GridSpec & s, double theta = 0.0)
  : spec(s), values(Eigen::ArrayXXd::Zero(s.size_cells, s.size_cells)), theta_rel(theta)
  {
  }

  double at(const CellIndex & c) const { return values(c.x, c.y); }
};

struct PolarSegment
{
  double p_req{0.0};  // highest performance requirement in the segment
  double d_req{0.0};  // distance of the furthest relevant cell, meters

  auto operator<=>(const PolarSegment &) const = default;
};

/// 360 one-degree segments; segment k covers [k deg, k+1 deg).
struct PolarRequirementMap
{
  std::array<PolarSegment, 360> segments{};

  /// Number of segments with a nonzero performance requirement.
  int relevant_segment_count() const;

  /// Largest per-segment performance requirement (0 when empty).
  double max_requirement() const;

  bool empty() const { return relevant_segment_count() == 0; }

  auto operator<=>(const PolarRequirementMap &) const = default;
};

/// Projects own-lane chain and/or surrounding lanes onto one binary layer.
/// Own and other lane marks merge by cell-wise max; both flags false gives a
/// zero grid. The own chain follows successors to own_chain_depth transitions;
/// other lanes are those within the grid radius (circumscribed circle).
LayerGrid layer_lane(
  const MapModel & map, const EgoState & ego, bool include_own, bool include_other,
  const GridSpec & spec, int own_chain_depth = 3);

/// Marks cells traversed by constant-turn-rate-and-velocity predictions for 21
/// uniformly sampled yaw rates in [yaw_rate - sigma, yaw_rate + sigma],
/// integrated at 0.1 s steps over the horizon. |yaw rate| < 1e-4 rad/s falls
/// back to the straight-line limit.
LayerGrid layer_ego_path(
  const EgoState & ego, const GridSpec & spec, double horizon_s = 3.0,
  double yaw_rate_sigma = deg_to_rad(10.0), int yaw_rate_samples = 21, double step_s = 0.1);

/// Marks the cell of every detection within the (closed) range threshold of the ego.
LayerGrid layer_object(
  const std::vector<Vec2> & detections, const GridSpec & spec, double range_threshold_m = 15.0);

/// Morphological max-dilation with an odd square kernel; edges truncate the
/// neighborhood. kernel == 1 is the identity.
LayerGrid dilate(const LayerGrid & layer, int kernel = 5);

/// Cell-wise sum of layers. All layers must share one GridSpec; an empty list
/// yields a zero grid over empty_spec.
AttentionGrid combine(
  const std::vector<LayerGrid> & layers, double theta_rel = 0.0,
  const GridSpec & empty_spec = GridSpec{});

/// Cells with value strictly above the grid's theta_rel, in x-major order.
std::vector<CellIndex> relevant_cells(const AttentionGrid & grid);

/// Folds relevant cells into 360 polar segments: per segment the maximum cell
/// value and the furthest cell-center distance. Angles measure from the ego
/// (grid center); the ego's own cell maps to segment 0.
PolarRequirementMap to_polar(const AttentionGrid & grid);

/// Row-major north-up CSV (top row = largest y), integer cell values.
void write_grid_csv(std::ostream & out, const AttentionGrid & grid);

/// CSV with header "segment,p_req,d_req", one row per degree segment.
void write_polar_csv(std::ostream & out, const PolarRequirementMap & polar);

}  // namespace awarekit

#endif  // AWAREKIT_ATTENTION_MAP_HPP_
