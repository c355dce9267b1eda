#pragma once

#include <span>
#include <vector>

#include "scalepaint/bezier.hpp"
#include "scalepaint/image.hpp"

namespace scalepaint {

/// Per-pixel MSE multipliers, broadcast across channels.
class WeightMap {
 public:
  static constexpr double kFloor = 0.1;

  WeightMap() = default;
  /// Uniform map of ones.
  WeightMap(int width, int height);
  /// Takes raw non-negative weights; throws InvalidInput on a size mismatch
  /// or negative entries. Values are used as given (no renormalization).
  WeightMap(int width, int height, std::vector<double> values);

  int width() const { return width_; }
  int height() const { return height_; }
  double at(int x, int y) const {
    return values_[static_cast<std::size_t>(y) * width_ + x];
  }
  std::span<const double> values() const { return values_; }
  double mean() const;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

/// Mean over pixels and channels of w(p) * (a - b)^2.
double weighted_mse(const RasterImage& a, const RasterImage& b, const WeightMap& w);

/// Self-intersection penalty of one cubic segment's control polygon.
double xing_segment(const CubicSegment& segment);

/// Sum of xing_segment over the path.
double xing_loss(const ClosedBezierPath& path);

/// Adds scale * d(xing_loss)/d(points) into grad (one entry per stored
/// control point) and returns the loss.
double xing_loss_gradient(const ClosedBezierPath& path, double scale, std::span<Vec2> grad);

/// raw(p) = mean-channel squared residual; w = max(0.1, s * raw / mean(raw))
/// with s chosen so the mean is exactly 1 (plain rescaling after the floor
/// would push floored pixels below 0.1). Uniform when mean(raw) <= 1e-12.
WeightMap update_weight_map(const RasterImage& rendered, const RasterImage& target);

}  // namespace scalepaint
