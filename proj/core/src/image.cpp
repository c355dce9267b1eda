#include "scalepaint/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "scalepaint/errors.hpp"
#include "scalepaint/parallel.hpp"

namespace scalepaint {

namespace detail {

unsigned worker_count() {
  static const unsigned count = [] {
    if (const char* env = std::getenv("SCALEPAINT_THREADS")) {
      const int n = std::atoi(env);
      if (n > 0) return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
  }();
  return count;
}

}  // namespace detail

RasterImage::RasterImage(int width, int height, double fill)
    : RasterImage(width, height, Color{fill, fill, fill}) {}

RasterImage::RasterImage(int width, int height, const Color& fill)
    : width_(width), height_(height) {
  if (width <= 0 || height <= 0) {
    throw InvalidInput("RasterImage: dimensions must be positive, got " +
                       std::to_string(width) + "x" + std::to_string(height));
  }
  data_.resize(pixel_count() * kChannels);
  for (std::size_t i = 0; i < data_.size(); i += kChannels) {
    data_[i] = fill[0];
    data_[i + 1] = fill[1];
    data_[i + 2] = fill[2];
  }
}

void RasterImage::clamp01() {
  for (double& v : data_) v = std::clamp(v, 0.0, 1.0);
}

int reflect101(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * n - 2 - i;
  }
  return i;
}

RasterImage convolve2d(const RasterImage& image, const Kernel2D& kernel) {
  if (image.empty()) throw InvalidInput("convolve2d: empty image");
  if (kernel.radius_x < 0 || kernel.radius_y < 0 ||
      kernel.weights.size() !=
          static_cast<std::size_t>(kernel.size_x()) * kernel.size_y()) {
    throw InvalidInput("convolve2d: malformed kernel");
  }
  if (kernel.size_x() > 2 * image.width() || kernel.size_y() > 2 * image.height()) {
    throw InvalidInput("convolve2d: kernel larger than twice the image extent");
  }

  const int w = image.width();
  const int h = image.height();
  RasterImage out(w, h);

  std::vector<int> xs(static_cast<std::size_t>(w) * kernel.size_x());
  for (int x = 0; x < w; ++x) {
    for (int dx = -kernel.radius_x; dx <= kernel.radius_x; ++dx) {
      xs[static_cast<std::size_t>(x) * kernel.size_x() + (dx + kernel.radius_x)] =
          reflect101(x + dx, w);
    }
  }

  // Normalized kernels accumulate offsets from the center sample, which
  // reproduces flat regions exactly; the plain sum can drift by an ulp.
  double weight_sum = 0.0;
  for (double v : kernel.weights) weight_sum += v;
  const bool normalized = std::abs(weight_sum - 1.0) < 1e-12;

  detail::parallel_blocks(static_cast<std::size_t>(h), [&](std::size_t row) {
    const int y = static_cast<int>(row);
    for (int x = 0; x < w; ++x) {
      const int* xrow = &xs[static_cast<std::size_t>(x) * kernel.size_x()];
      double base[3] = {0.0, 0.0, 0.0};
      if (normalized) {
        for (int c = 0; c < 3; ++c) base[c] = image.at(x, y, c);
      }
      double acc[3] = {0.0, 0.0, 0.0};
      for (int dy = -kernel.radius_y; dy <= kernel.radius_y; ++dy) {
        const int sy = reflect101(y + dy, h);
        for (int kx = 0; kx < kernel.size_x(); ++kx) {
          const double wgt = kernel.at(kx - kernel.radius_x, dy);
          if (wgt == 0.0) continue;
          const int sx = xrow[kx];
          acc[0] += wgt * (image.at(sx, sy, 0) - base[0]);
          acc[1] += wgt * (image.at(sx, sy, 1) - base[1]);
          acc[2] += wgt * (image.at(sx, sy, 2) - base[2]);
        }
      }
      out.at(x, y, 0) = base[0] + acc[0];
      out.at(x, y, 1) = base[1] + acc[1];
      out.at(x, y, 2) = base[2] + acc[2];
    }
  });
  return out;
}

RasterImage gradient_magnitude(const RasterImage& image) {
  const int w = image.width();
  const int h = image.height();
  if (w < 2 || h < 2) {
    throw InvalidInput("gradient_magnitude: both extents must be at least 2");
  }
  RasterImage out(w, h);
  auto diff = [](double lo, double hi, double span) { return (hi - lo) / span; };
  for (int y = 0; y < h; ++y) {
    const int y0 = (y == 0) ? 0 : y - 1;
    const int y1 = (y == h - 1) ? h - 1 : y + 1;
    for (int x = 0; x < w; ++x) {
      const int x0 = (x == 0) ? 0 : x - 1;
      const int x1 = (x == w - 1) ? w - 1 : x + 1;
      for (int c = 0; c < RasterImage::kChannels; ++c) {
        const double gx = diff(image.at(x0, y, c), image.at(x1, y, c), x1 - x0);
        const double gy = diff(image.at(x, y0, c), image.at(x, y1, c), y1 - y0);
        out.at(x, y, c) = std::sqrt(gx * gx + gy * gy);
      }
    }
  }
  return out;
}

RasterImage laplacian(const RasterImage& image) {
  const int w = image.width();
  const int h = image.height();
  if (w < 3 || h < 3) {
    throw InvalidInput("laplacian: both extents must be at least 3");
  }
  RasterImage out(w, h);
  for (int y = 0; y < h; ++y) {
    const int yn = reflect101(y - 1, h);
    const int ys = reflect101(y + 1, h);
    for (int x = 0; x < w; ++x) {
      const int xw = reflect101(x - 1, w);
      const int xe = reflect101(x + 1, w);
      for (int c = 0; c < RasterImage::kChannels; ++c) {
        out.at(x, y, c) = image.at(x, yn, c) + image.at(x, ys, c) +
                          image.at(xw, y, c) + image.at(xe, y, c) -
                          4.0 * image.at(x, y, c);
      }
    }
  }
  return out;
}

double mean_value(const RasterImage& image) {
  double sum = 0.0;
  for (double v : image.data()) sum += v;
  return image.empty() ? 0.0 : sum / static_cast<double>(image.data().size());
}

Color mean_color(const RasterImage& image) {
  Color sum{0.0, 0.0, 0.0};
  const auto data = image.data();
  for (std::size_t i = 0; i < data.size(); i += 3) {
    sum[0] += data[i];
    sum[1] += data[i + 1];
    sum[2] += data[i + 2];
  }
  const double n = static_cast<double>(image.pixel_count());
  if (n > 0) {
    for (double& s : sum) s /= n;
  }
  return sum;
}

}  // namespace scalepaint
