#include "scalepaint/noise.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "scalepaint/errors.hpp"

namespace scalepaint {

RasterImage add_noise(const RasterImage& image, double sigma_255, std::uint64_t seed) {
  if (!(sigma_255 >= 0.0) || !std::isfinite(sigma_255)) {
    throw InvalidInput("add_noise: sigma must be finite and >= 0");
  }
  RasterImage out = image;
  if (sigma_255 == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma_255 / 255.0);
  for (double& v : out.data()) v = std::clamp(v + normal(rng), 0.0, 1.0);
  return out;
}

RasterImage make_phantom(int size) {
  if (size < 16) throw InvalidInput("make_phantom: size must be at least 16");
  RasterImage img(size, size, 0.2);
  auto fill = [&](double x0, double y0, double x1, double y1, double v) {
    const int ix0 = static_cast<int>(std::lround(x0 * size));
    const int iy0 = static_cast<int>(std::lround(y0 * size));
    const int ix1 = static_cast<int>(std::lround(x1 * size));
    const int iy1 = static_cast<int>(std::lround(y1 * size));
    for (int y = iy0; y < iy1; ++y) {
      for (int x = ix0; x < ix1; ++x) img.set_pixel(x, y, {v, v, v});
    }
  };
  // Off-center so the nesting is not symmetric about either axis.
  fill(0.125, 0.15625, 0.875, 0.84375, 0.5);
  fill(0.3125, 0.375, 0.65625, 0.625, 0.8);
  return img;
}

}  // namespace scalepaint
