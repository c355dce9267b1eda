#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "scalepaint/image.hpp"

namespace scalepaint {

/// Blur standard deviations along x (mu) and y (sigma), in pixels.
struct BlurParams {
  double mu = 1.0;
  double sigma = 1.0;
};

struct ScaleLevel {
  int index = 0;
  double mu = 0.0;
  double sigma = 0.0;
  RasterImage image;
};

/// Smoothed copies of one source image, coarsest (largest blur) first.
/// Every level keeps the source resolution.
struct ScaleSpacePyramid {
  std::vector<ScaleLevel> levels;
  double grad_weight = 0.0;
  double lap_weight = 0.0;

  int depth() const { return static_cast<int>(levels.size()); }
};

/// Axis-aligned separable Gaussian with std-devs (mu, sigma), radius
/// ceil(3 * stddev) per axis, renormalized to unit sum. Throws InvalidInput
/// for non-positive std-devs.
Kernel2D make_aniso_kernel(double mu, double sigma);

/// Builds one level per schedule entry:
///   clamp01(G(mu, sigma) * source + grad_weight * |grad source| + lap_weight * lap source).
/// The schedule must be non-empty and strictly decreasing in both parameters,
/// otherwise ConfigError is thrown.
ScaleSpacePyramid build_pyramid(const RasterImage& source,
                                const std::vector<BlurParams>& schedule,
                                double grad_weight, double lap_weight);

/// Throws ConfigError unless the schedule is non-empty, positive and
/// strictly decreasing in both parameters.
void validate_schedule(const std::vector<BlurParams>& schedule);

/// Writes each level as pyramid_t{t}.png under dir.
void dump_pyramid(const ScaleSpacePyramid& pyramid, const std::filesystem::path& dir);

}  // namespace scalepaint
