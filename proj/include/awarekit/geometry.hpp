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

#ifndef AWAREKIT_GEOMETRY_HPP_
#define AWAREKIT_GEOMETRY_HPP_

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <vector>

namespace awarekit
{

using Vec2 = Eigen::Vector2d;
using Polyline = std::vector<Vec2>;
using Polygon = std::vector<Vec2>;

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double rad)
{
  double a = std::fmod(rad + std::numbers::pi, 2.0 * std::numbers::pi);
  if (a <= 0.0) {
    a += 2.0 * std::numbers::pi;
  }
  return a - std::numbers::pi;
}

/// Absolute angular difference in [0, pi].
inline double angle_diff(double a, double b) { return std::abs(wrap_angle(a - b)); }

/// Heading of a vector in radians; zero vector maps to 0.
inline double heading_of(const Vec2 & v)
{
  if (v.squaredNorm() == 0.0) {
    return 0.0;
  }
  return std::atan2(v.y(), v.x());
}

struct PolylinePoint
{
  Vec2 point{0.0, 0.0};       // closest point on the polyline
  double distance{0.0};       // euclidean distance from the query
  double tangent_heading{0.0};  // heading of the segment holding the closest point
  double arc_length{0.0};     // arc length from the polyline start to the closest point
};

/// Closest point on segment [a, b] to p.
inline Vec2 closest_on_segment(const Vec2 & a, const Vec2 & b, const Vec2 & p)
{
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) {
    return a;
  }
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return a + t * ab;
}

/// Closest point, distance, local tangent, and arc length along a polyline.
inline PolylinePoint project_to_polyline(const Polyline & line, const Vec2 & p)
{
  PolylinePoint best;
  best.distance = std::numeric_limits<double>::infinity();
  double arc = 0.0;
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    const Vec2 q = closest_on_segment(line[i], line[i + 1], p);
    const double d = (p - q).norm();
    if (d < best.distance) {
      best.point = q;
      best.distance = d;
      best.tangent_heading = heading_of(line[i + 1] - line[i]);
      best.arc_length = arc + (q - line[i]).norm();
    }
    arc += (line[i + 1] - line[i]).norm();
  }
  if (line.size() == 1) {
    best.point = line.front();
    best.distance = (p - line.front()).norm();
    best.tangent_heading = 0.0;
    best.arc_length = 0.0;
  }
  return best;
}

/// Point-in-polygon test, boundary counts as inside.
inline bool point_in_polygon(const Polygon & poly, const Vec2 & p, double edge_tol = 1e-9)
{
  if (poly.size() < 3) {
    return false;
  }
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Vec2 & a = poly[j];
    const Vec2 & b = poly[i];
    if ((p - closest_on_segment(a, b, p)).norm() <= edge_tol) {
      return true;
    }
    const bool crosses = (b.y() > p.y()) != (a.y() > p.y());
    if (crosses) {
      const double x_at = b.x() + (p.y() - b.y()) / (a.y() - b.y()) * (a.x() - b.x());
      if (p.x() < x_at) {
        inside = !inside;
      }
    }
  }
  return inside;
}

namespace detail
{

inline double cross2(const Vec2 & a, const Vec2 & b) { return a.x() * b.y() - a.y() * b.x(); }

inline bool segments_intersect(const Vec2 & p1, const Vec2 & p2, const Vec2 & q1, const Vec2 & q2)
{
  const double d1 = cross2(q2 - q1, p1 - q1);
  const double d2 = cross2(q2 - q1, p2 - q1);
  const double d3 = cross2(p2 - p1, q1 - p1);
  const double d4 = cross2(p2 - p1, q2 - p1);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  auto on_segment = [](const Vec2 & a, const Vec2 & b, const Vec2 & c) {
    return std::min(a.x(), b.x()) <= c.x() && c.x() <= std::max(a.x(), b.x()) &&
           std::min(a.y(), b.y()) <= c.y() && c.y() <= std::max(a.y(), b.y());
  };
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

}  // namespace detail

/// True iff no two non-adjacent edges of the closed polygon intersect.
inline bool polygon_is_simple(const Polygon & poly)
{
  const std::size_t n = poly.size();
  if (n < 3) {
    return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 & a1 = poly[i];
    const Vec2 & a2 = poly[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      // skip adjacent edges (sharing a vertex)
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) {
        continue;
      }
      const Vec2 & b1 = poly[j];
      const Vec2 & b2 = poly[(j + 1) % n];
      if (detail::segments_intersect(a1, a2, b1, b2)) {
        return false;
      }
    }
  }
  return true;
}

/// True iff angle deg lies in the half-open span [start, start + span) on the circle.
inline bool angle_in_span_deg(double angle_deg, double start_deg, double span_deg)
{
  if (span_deg >= 360.0) {
    return true;
  }
  double rel = std::fmod(angle_deg - start_deg, 360.0);
  if (rel < 0.0) {
    rel += 360.0;
  }
  return rel < span_deg;
}

}  // namespace awarekit

#endif  // AWAREKIT_GEOMETRY_HPP_
