#include "scalepaint/bezier.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

#include "scalepaint/errors.hpp"
#include "scalepaint/segmentation.hpp"

namespace scalepaint {

namespace {

Vec2 lerp(Vec2 a, Vec2 b, double t) { return a + t * (b - a); }

// cos/sin with exact zeros at multiples of pi/2, so arcs built on the axes
// produce exactly parallel tangents.
double snapped(double v) { return std::abs(v) < 1e-12 ? 0.0 : v; }

// De Casteljau evaluation: exact at both ends and for coincident points.
Vec2 de_casteljau(const CubicSegment& s, double t) {
  if (t == 1.0) return s.p3;
  const Vec2 a = lerp(s.p0, s.p1, t);
  const Vec2 b = lerp(s.p1, s.p2, t);
  const Vec2 c = lerp(s.p2, s.p3, t);
  return lerp(lerp(a, b, t), lerp(b, c, t), t);
}

}  // namespace

std::array<double, 4> bernstein3(double t) {
  const double s = 1.0 - t;
  return {s * s * s, 3.0 * t * s * s, 3.0 * t * t * s, t * t * t};
}

Vec2 eval_cubic(const CubicSegment& seg, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidInput("eval_cubic: t must lie in [0, 1]");
  return de_casteljau(seg, t);
}

std::array<CubicSegment, 2> split_cubic(const CubicSegment& s, double t) {
  const Vec2 a = lerp(s.p0, s.p1, t);
  const Vec2 b = lerp(s.p1, s.p2, t);
  const Vec2 c = lerp(s.p2, s.p3, t);
  const Vec2 d = lerp(a, b, t);
  const Vec2 e = lerp(b, c, t);
  const Vec2 m = lerp(d, e, t);
  return {CubicSegment{s.p0, a, d, m}, CubicSegment{m, e, c, s.p3}};
}

ClosedBezierPath::ClosedBezierPath(std::vector<Vec2> points, Color fill_color)
    : fill(fill_color), points_(std::move(points)) {
  if (points_.size() < 6 || points_.size() % 3 != 0) {
    throw InvalidInput("ClosedBezierPath: need 3k control points with k >= 2");
  }
  depths_.assign(points_.size() / 3, 0);
}

ClosedBezierPath make_ellipse_path(Vec2 center, double semi_a, double semi_b,
                                   double rotation, int k, Color fill) {
  if (k < 2) throw InvalidInput("make_ellipse_path: need at least 2 segments");
  const double step = 2.0 * std::numbers::pi / k;
  const double kappa = 4.0 / 3.0 * std::tan(step / 4.0);
  const double cr = std::cos(rotation);
  const double sr = std::sin(rotation);
  auto map = [&](Vec2 p) {
    const double x = semi_a * p.x;
    const double y = semi_b * p.y;
    return Vec2{center.x + cr * x - sr * y, center.y + sr * x + cr * y};
  };

  std::vector<Vec2> points;
  points.reserve(static_cast<std::size_t>(3 * k));
  for (int i = 0; i < k; ++i) {
    const double a0 = i * step;
    const double a1 = (i + 1) * step;
    const Vec2 e0{snapped(std::cos(a0)), snapped(std::sin(a0))};
    const Vec2 e1{snapped(std::cos(a1)), snapped(std::sin(a1))};
    const Vec2 t0{-e0.y, e0.x};
    const Vec2 t1{-e1.y, e1.x};
    points.push_back(map(e0));
    points.push_back(map(e0 + kappa * t0));
    points.push_back(map(e1 - kappa * t1));
  }
  return ClosedBezierPath(std::move(points), fill);
}

ClosedBezierPath init_path_for_component(const Component& comp, int k) {
  if (k < 2) throw InvalidInput("init_path_for_component: need at least 2 segments");
  if (comp.area < 1) throw InvalidInput("init_path_for_component: empty component");

  double sx = 0.0, sy = 0.0;
  for (int y = comp.bbox.y_min; y <= comp.bbox.y_max; ++y) {
    for (int x = comp.bbox.x_min; x <= comp.bbox.x_max; ++x) {
      if (!comp.contains(x, y)) continue;
      sx += x + 0.5;
      sy += y + 0.5;
    }
  }
  const double n = comp.area;
  const Vec2 c{sx / n, sy / n};
  double cxx = 0.0, cyy = 0.0, cxy = 0.0;
  for (int y = comp.bbox.y_min; y <= comp.bbox.y_max; ++y) {
    for (int x = comp.bbox.x_min; x <= comp.bbox.x_max; ++x) {
      if (!comp.contains(x, y)) continue;
      const double dx = x + 0.5 - c.x;
      const double dy = y + 0.5 - c.y;
      cxx += dx * dx;
      cyy += dy * dy;
      cxy += dx * dy;
    }
  }
  // Moments of the union of unit pixel squares: centers plus 1/12 per axis.
  cxx = cxx / n + 1.0 / 12.0;
  cyy = cyy / n + 1.0 / 12.0;
  cxy = cxy / n;

  const double half_trace = 0.5 * (cxx + cyy);
  const double disc = std::sqrt(std::max(0.0, 0.25 * (cxx - cyy) * (cxx - cyy) + cxy * cxy));
  const double l1 = half_trace + disc;
  const double l2 = std::max(0.0, half_trace - disc);
  const double angle = (cxy == 0.0 && cxx >= cyy) ? 0.0 : 0.5 * std::atan2(2.0 * cxy, cxx - cyy);

  // A uniform filled ellipse has axis variance (semi-axis)^2 / 4.
  const double a = std::max(1.0, 2.0 * std::sqrt(l1));
  const double b = std::max(1.0, 2.0 * std::sqrt(l2));
  return make_ellipse_path(c, a, b, angle, k, comp.mean_color);
}

ClosedBezierPath refine_path(const ClosedBezierPath& path) {
  const int k = path.segment_count();
  int longest = 0;
  double best = -1.0;
  for (int i = 0; i < k; ++i) {
    const auto s = path.segment(i);
    const double chord = norm(s.p3 - s.p0);
    if (chord > best) {
      best = chord;
      longest = i;
    }
  }
  const auto halves = split_cubic(path.segment(longest), 0.5);

  ClosedBezierPath out = path;
  const auto at = static_cast<std::ptrdiff_t>(3 * longest);
  out.points_[static_cast<std::size_t>(at) + 1] = halves[0].p1;
  out.points_[static_cast<std::size_t>(at) + 2] = halves[0].p2;
  const Vec2 tail[3] = {halves[0].p3, halves[1].p1, halves[1].p2};
  out.points_.insert(out.points_.begin() + at + 3, std::begin(tail), std::end(tail));

  const auto depth = static_cast<std::uint8_t>(path.depths_[static_cast<std::size_t>(longest)] + 1);
  out.depths_[static_cast<std::size_t>(longest)] = depth;
  out.depths_.insert(out.depths_.begin() + longest + 1, depth);
  return out;
}

std::vector<PolylineVertex> tessellate(const ClosedBezierPath& path, int samples_per_segment) {
  if (samples_per_segment < 1) throw InvalidInput("tessellate: need at least one sample");
  std::vector<PolylineVertex> out;
  const int k = path.segment_count();
  out.reserve(static_cast<std::size_t>(k * samples_per_segment));
  for (int i = 0; i < k; ++i) {
    const auto seg = path.segment(i);
    const int n = path.samples_for(i, samples_per_segment);
    for (int j = 0; j < n; ++j) {
      PolylineVertex v;
      v.segment = i;
      if (j == 0) {
        v.weights = {1.0, 0.0, 0.0, 0.0};
        v.position = seg.p0;
      } else {
        const double t = static_cast<double>(j) / n;
        v.weights = bernstein3(t);
        v.position = de_casteljau(seg, t);
      }
      out.push_back(v);
    }
  }
  return out;
}

std::vector<Vec2> flatten_path(const ClosedBezierPath& path, int samples_per_segment) {
  if (samples_per_segment < 2) throw InvalidInput("flatten_path: need n >= 2");
  const auto verts = tessellate(path, samples_per_segment);
  std::vector<Vec2> out;
  out.reserve(verts.size());
  for (const auto& v : verts) out.push_back(v.position);
  return out;
}

PolylineDistance query_polyline(std::span<const Vec2> vertices, Vec2 q) {
  PolylineDistance best;
  const std::size_t m = vertices.size();
  if (m == 0) return best;
  double best_d2 = std::numeric_limits<double>::infinity();
  bool inside = false;
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 a = vertices[i];
    const Vec2 b = vertices[i + 1 == m ? 0 : i + 1];
    const Vec2 ab = b - a;
    const Vec2 aq = q - a;
    const double len2 = dot(ab, ab);
    double u = 0.0;
    if (len2 > 0.0) u = std::clamp(dot(aq, ab) / len2, 0.0, 1.0);
    const Vec2 r = aq - u * ab;
    const double d2 = dot(r, r);
    if (d2 < best_d2) {
      best_d2 = d2;
      best.edge = i;
      best.u = u;
    }
    if ((a.y > q.y) != (b.y > q.y)) {
      const double xc = a.x + (q.y - a.y) * ab.x / ab.y;
      if (q.x < xc) inside = !inside;
    }
  }
  const Vec2 a = vertices[best.edge];
  const Vec2 b = vertices[best.edge + 1 == m ? 0 : best.edge + 1];
  best.nearest = a + best.u * (b - a);
  best.distance = std::sqrt(best_d2);
  best.inside = inside;
  return best;
}

double signed_distance(const ClosedBezierPath& path, Vec2 point, int samples_per_segment) {
  if (samples_per_segment < 8) throw InvalidInput("signed_distance: need n >= 8");
  const auto poly = flatten_path(path, samples_per_segment);
  return query_polyline(poly, point).signed_distance();
}

}  // namespace scalepaint
