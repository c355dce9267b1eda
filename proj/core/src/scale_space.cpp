#include "scalepaint/scale_space.hpp"

#include <cmath>
#include <string>

#include "scalepaint/errors.hpp"
#include "scalepaint/image_io.hpp"

namespace scalepaint {

namespace {

std::vector<double> gaussian_1d(double stddev, int radius) {
  std::vector<double> w(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-0.5 * (i * i) / (stddev * stddev));
    w[static_cast<std::size_t>(i + radius)] = v;
    sum += v;
  }
  for (double& v : w) v /= sum;
  return w;
}

}  // namespace

Kernel2D make_aniso_kernel(double mu, double sigma) {
  if (!(mu > 0.0) || !(sigma > 0.0) || !std::isfinite(mu) || !std::isfinite(sigma)) {
    throw InvalidInput("make_aniso_kernel: std-devs must be positive and finite");
  }
  Kernel2D k;
  k.radius_x = static_cast<int>(std::ceil(3.0 * mu));
  k.radius_y = static_cast<int>(std::ceil(3.0 * sigma));
  const auto wx = gaussian_1d(mu, k.radius_x);
  const auto wy = gaussian_1d(sigma, k.radius_y);
  k.weights.resize(wx.size() * wy.size());
  double sum = 0.0;
  for (std::size_t j = 0; j < wy.size(); ++j) {
    for (std::size_t i = 0; i < wx.size(); ++i) {
      const double v = wy[j] * wx[i];
      k.weights[j * wx.size() + i] = v;
      sum += v;
    }
  }
  for (double& v : k.weights) v /= sum;
  return k;
}

void validate_schedule(const std::vector<BlurParams>& schedule) {
  if (schedule.empty()) throw ConfigError("scale schedule must not be empty");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const auto& s = schedule[i];
    if (!(s.mu > 0.0) || !(s.sigma > 0.0)) {
      throw ConfigError("scale schedule entries must be positive");
    }
    if (i > 0 && !(s.mu < schedule[i - 1].mu && s.sigma < schedule[i - 1].sigma)) {
      throw ConfigError("scale schedule must be strictly decreasing in both parameters");
    }
  }
}

ScaleSpacePyramid build_pyramid(const RasterImage& source,
                                const std::vector<BlurParams>& schedule,
                                double grad_weight, double lap_weight) {
  validate_schedule(schedule);
  if (!(grad_weight >= 0.0) || !(lap_weight >= 0.0)) {
    throw ConfigError("pyramid weights must be non-negative");
  }

  // Detail terms come from the raw source, not the blurred level.
  RasterImage grad, lap;
  if (grad_weight > 0.0) grad = gradient_magnitude(source);
  if (lap_weight > 0.0) lap = laplacian(source);

  ScaleSpacePyramid pyramid;
  pyramid.grad_weight = grad_weight;
  pyramid.lap_weight = lap_weight;
  pyramid.levels.reserve(schedule.size());
  for (std::size_t t = 0; t < schedule.size(); ++t) {
    const auto& s = schedule[t];
    RasterImage level = convolve2d(source, make_aniso_kernel(s.mu, s.sigma));
    auto out = level.data();
    if (grad_weight > 0.0) {
      const auto g = grad.data();
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += grad_weight * g[i];
    }
    if (lap_weight > 0.0) {
      const auto l = lap.data();
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += lap_weight * l[i];
    }
    level.clamp01();
    pyramid.levels.push_back({static_cast<int>(t), s.mu, s.sigma, std::move(level)});
  }
  return pyramid;
}

void dump_pyramid(const ScaleSpacePyramid& pyramid, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& level : pyramid.levels) {
    save_image(level.image, dir / ("pyramid_t" + std::to_string(level.index) + ".png"));
  }
}

}  // namespace scalepaint
