#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "scalepaint/image.hpp"

namespace scalepaint {

struct Component;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

struct CubicSegment {
  Vec2 p0, p1, p2, p3;
};

/// Cubic Bernstein basis at t.
std::array<double, 4> bernstein3(double t);

/// Evaluates the cubic at t in [0, 1]; throws InvalidInput otherwise.
Vec2 eval_cubic(const CubicSegment& segment, double t);

/// de Casteljau split at t; returns {left, right}.
std::array<CubicSegment, 2> split_cubic(const CubicSegment& segment, double t);

/// Closed chain of k >= 2 cubic segments with a flat fill color.
///
/// Control points are stored once: segment i reads points[3i .. 3i+3] with the
/// last index taken modulo 3k, so segment i's end point *is* segment i+1's
/// start point. Each segment also records how many times it was produced by
/// halving (its subdivision depth), which controls its flattening density so
/// that refinement keeps the tessellation unchanged.
class ClosedBezierPath {
 public:
  ClosedBezierPath() = default;
  /// Throws InvalidInput unless points.size() == 3k with k >= 2.
  ClosedBezierPath(std::vector<Vec2> points, Color fill);

  int segment_count() const { return static_cast<int>(points_.size() / 3); }
  std::size_t point_count() const { return points_.size(); }

  /// Storage index of control point j (0..3) of segment i.
  std::size_t point_index(int segment, int j) const {
    return (3 * static_cast<std::size_t>(segment) + static_cast<std::size_t>(j)) %
           points_.size();
  }

  CubicSegment segment(int i) const {
    return {points_[point_index(i, 0)], points_[point_index(i, 1)],
            points_[point_index(i, 2)], points_[point_index(i, 3)]};
  }

  std::span<const Vec2> points() const { return points_; }
  std::span<Vec2> points() { return points_; }

  std::span<const std::uint8_t> depths() const { return depths_; }

  /// Flattening samples for segment i given the nominal per-segment count.
  int samples_for(int segment, int samples_per_segment) const {
    return std::max(1, samples_per_segment >> depths_[static_cast<std::size_t>(segment)]);
  }

  Color fill{0.0, 0.0, 0.0};

 private:
  friend ClosedBezierPath refine_path(const ClosedBezierPath& path);

  std::vector<Vec2> points_;
  std::vector<std::uint8_t> depths_;
};

/// Painted scene: background first, then paths in list order.
struct VectorScene {
  Color background{0.0, 0.0, 0.0};
  std::vector<ClosedBezierPath> paths;
};

/// Ellipse matched to the mask's centroid and second moments, drawn with k
/// cubic arcs. Semi-axes are clamped to at least 1 px. Fill is the
/// component's mean color.
ClosedBezierPath init_path_for_component(const Component& component, int k);

/// Ellipse drawn with k cubic arcs; rotation in radians.
ClosedBezierPath make_ellipse_path(Vec2 center, double semi_a, double semi_b, double rotation,
                                   int k, Color fill);

/// Splits the segment with the longest chord (lowest index on ties) at t = 0.5.
ClosedBezierPath refine_path(const ClosedBezierPath& path);

/// One flattened vertex and the control points it depends on.
struct PolylineVertex {
  Vec2 position;
  int segment = 0;
  std::array<double, 4> weights{};  // Bernstein weights of the segment's 4 controls
};

/// Closed polyline sampled uniformly in each segment's original curve
/// parameter; a segment at depth d contributes max(1, n >> d) vertices starting
/// at its first control point. Fresh paths therefore have k*n vertices.
std::vector<PolylineVertex> tessellate(const ClosedBezierPath& path, int samples_per_segment);

/// Vertex positions of tessellate(); requires n >= 2.
std::vector<Vec2> flatten_path(const ClosedBezierPath& path, int samples_per_segment);

/// Nearest point on a closed polyline, with the even-odd inside flag.
struct PolylineDistance {
  double distance = 0.0;  // unsigned
  bool inside = false;
  std::size_t edge = 0;   // edge from vertex `edge` to vertex `edge + 1` (mod m)
  double u = 0.0;         // position of the nearest point along that edge
  Vec2 nearest;

  double signed_distance() const { return inside ? -distance : distance; }
};

/// Ties on the minimum pick the lowest edge index.
PolylineDistance query_polyline(std::span<const Vec2> vertices, Vec2 point);

/// Negative inside, positive outside (even-odd on the flattened polyline).
/// Requires n >= 8.
double signed_distance(const ClosedBezierPath& path, Vec2 point, int samples_per_segment);

}  // namespace scalepaint
