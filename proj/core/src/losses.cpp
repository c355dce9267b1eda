#include "scalepaint/losses.hpp"

#include <algorithm>
#include <cmath>

#include "scalepaint/errors.hpp"

namespace scalepaint {

namespace {

constexpr double kNormEps = 1e-9;
// Normalized cross products below this are rounding noise on (anti)parallel
// edges, e.g. the half-ellipse arcs of a two-segment path.
constexpr double kParallelEps = 1e-12;

double sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

WeightMap::WeightMap(int width, int height)
    : WeightMap(width, height,
                std::vector<double>(static_cast<std::size_t>(std::max(width, 0)) *
                                        static_cast<std::size_t>(std::max(height, 0)),
                                    1.0)) {}

WeightMap::WeightMap(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (width <= 0 || height <= 0 ||
      values_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw InvalidInput("WeightMap: size mismatch");
  }
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidInput("WeightMap: weights must be finite and non-negative");
    }
  }
}

double WeightMap::mean() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return values_.empty() ? 0.0 : s / static_cast<double>(values_.size());
}

double weighted_mse(const RasterImage& a, const RasterImage& b, const WeightMap& w) {
  if (!a.same_shape(b) || w.width() != a.width() || w.height() != a.height()) {
    throw InvalidInput("weighted_mse: dimension mismatch");
  }
  const auto da = a.data();
  const auto db = b.data();
  const auto wv = w.values();
  double sum = 0.0;
  for (std::size_t p = 0; p < wv.size(); ++p) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c) {
      const double r = da[3 * p + c] - db[3 * p + c];
      s += r * r;
    }
    sum += wv[p] * s;
  }
  return sum / (3.0 * static_cast<double>(wv.size()));
}

namespace {

double xing_d2(const Vec2& e1, const Vec2& e3, double n1, double n3) {
  if (n1 < kNormEps || n3 < kNormEps) return 0.0;
  const double d2 = cross(e1, e3) / (n1 * n3);
  return std::abs(d2) < kParallelEps ? 0.0 : d2;
}

}  // namespace

double xing_segment(const CubicSegment& s) {
  const Vec2 e1 = s.p1 - s.p0;
  const Vec2 e2 = s.p2 - s.p1;
  const Vec2 e3 = s.p3 - s.p2;
  const double d1 = 0.5 * (1.0 + sign(cross(e1, e2)));
  const double n1 = norm(e1);
  const double n3 = norm(e3);
  const double d2 = xing_d2(e1, e3, n1, n3);
  return d1 * std::max(0.0, -d2) + (1.0 - d1) * std::max(0.0, d2);
}

double xing_loss(const ClosedBezierPath& path) {
  double total = 0.0;
  for (int i = 0; i < path.segment_count(); ++i) total += xing_segment(path.segment(i));
  return total;
}

double xing_loss_gradient(const ClosedBezierPath& path, double scale, std::span<Vec2> grad) {
  if (grad.size() != path.point_count()) {
    throw InvalidInput("xing_loss_gradient: gradient buffer size mismatch");
  }
  double total = 0.0;
  for (int i = 0; i < path.segment_count(); ++i) {
    const auto s = path.segment(i);
    total += xing_segment(s);

    const Vec2 e1 = s.p1 - s.p0;
    const Vec2 e2 = s.p2 - s.p1;
    const Vec2 e3 = s.p3 - s.p2;
    const double n1 = norm(e1);
    const double n3 = norm(e3);
    if (n1 < kNormEps || n3 < kNormEps) continue;
    const double d1 = 0.5 * (1.0 + sign(cross(e1, e2)));
    const double d2 = xing_d2(e1, e3, n1, n3);
    double dpen = 0.0;  // d(penalty)/d(d2); the sign term is piecewise constant
    if (d2 < 0.0) dpen = -d1;
    if (d2 > 0.0) dpen = 1.0 - d1;
    if (dpen == 0.0) continue;

    const double inv = 1.0 / (n1 * n3);
    const Vec2 dd2_de1 = Vec2{e3.y, -e3.x} * inv - (d2 / (n1 * n1)) * e1;
    const Vec2 dd2_de3 = Vec2{-e1.y, e1.x} * inv - (d2 / (n3 * n3)) * e3;
    const double f = scale * dpen;
    grad[path.point_index(i, 0)] -= f * dd2_de1;
    grad[path.point_index(i, 1)] += f * dd2_de1;
    grad[path.point_index(i, 2)] -= f * dd2_de3;
    grad[path.point_index(i, 3)] += f * dd2_de3;
  }
  return total;
}

WeightMap update_weight_map(const RasterImage& rendered, const RasterImage& target) {
  if (!rendered.same_shape(target)) throw InvalidInput("update_weight_map: dimension mismatch");
  const std::size_t n = rendered.pixel_count();
  const auto a = rendered.data();
  const auto b = target.data();
  std::vector<double> raw(n);
  double mean = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c) {
      const double r = a[3 * p + c] - b[3 * p + c];
      s += r * r;
    }
    raw[p] = s / 3.0;
    mean += raw[p];
  }
  mean /= static_cast<double>(n);
  if (!(mean > 1e-12)) return WeightMap(rendered.width(), rendered.height());

  // Find the scale s with mean(max(0.1, s * raw / mean)) == 1. The floored
  // set only grows as s shrinks, so the fixed point is reached in finitely
  // many passes.
  for (double& v : raw) v /= mean;
  const double floor = WeightMap::kFloor;
  const double total = static_cast<double>(n);
  double s = 1.0;
  for (std::size_t pass = 0; pass <= n; ++pass) {
    double free_sum = 0.0;
    std::size_t count = 0;
    for (double v : raw) {
      if (s * v < floor) {
        ++count;
      } else {
        free_sum += v;
      }
    }
    if (count == n || free_sum <= 0.0) return WeightMap(rendered.width(), rendered.height());
    const double next = (total - floor * static_cast<double>(count)) / free_sum;
    if (next == s) break;
    s = next;
  }
  for (double& v : raw) v = std::max(floor, s * v);
  return WeightMap(rendered.width(), rendered.height(), std::move(raw));
}

}  // namespace scalepaint
