#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace scalepaint {

using Color = std::array<double, 3>;

/// Dense row-major RGB image with intensities nominally in [0, 1].
class RasterImage {
 public:
  static constexpr int kChannels = 3;

  RasterImage() = default;
  /// Throws InvalidInput unless width and height are positive.
  RasterImage(int width, int height, double fill = 0.0);
  RasterImage(int width, int height, const Color& fill);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  bool empty() const { return data_.empty(); }

  double& at(int x, int y, int c) { return data_[index(x, y, c)]; }
  double at(int x, int y, int c) const { return data_[index(x, y, c)]; }

  Color pixel(int x, int y) const {
    const std::size_t i = index(x, y, 0);
    return {data_[i], data_[i + 1], data_[i + 2]};
  }
  void set_pixel(int x, int y, const Color& c) {
    const std::size_t i = index(x, y, 0);
    data_[i] = c[0];
    data_[i + 1] = c[1];
    data_[i + 2] = c[2];
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool same_shape(const RasterImage& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  /// Clamps every value into [0, 1].
  void clamp01();

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) * kChannels + static_cast<std::size_t>(c);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

/// Correlation kernel with odd extents (2*radius_x+1) x (2*radius_y+1),
/// stored row-major.
struct Kernel2D {
  int radius_x = 0;
  int radius_y = 0;
  std::vector<double> weights;

  int size_x() const { return 2 * radius_x + 1; }
  int size_y() const { return 2 * radius_y + 1; }
  double at(int dx, int dy) const {
    return weights[static_cast<std::size_t>(dy + radius_y) * size_x() +
                   static_cast<std::size_t>(dx + radius_x)];
  }

  static Kernel2D identity() { return {0, 0, {1.0}}; }
};

/// Maps an out-of-range index back into [0, n) by reflect-101 mirroring
/// (the edge sample is not repeated).
int reflect101(int i, int n);

/// Per-channel 2D correlation with reflect-101 borders. Throws InvalidInput
/// when the kernel shape is malformed or wider than twice the image extent.
RasterImage convolve2d(const RasterImage& image, const Kernel2D& kernel);

/// Per-channel gradient magnitude: central differences inside, one-sided
/// differences on the border rows/columns. Requires width, height >= 2.
RasterImage gradient_magnitude(const RasterImage& image);

/// Per-channel 5-point Laplacian with reflect-101 borders. Requires
/// width, height >= 3.
RasterImage laplacian(const RasterImage& image);

/// Mean of all samples over all channels.
double mean_value(const RasterImage& image);

/// Per-channel mean color.
Color mean_color(const RasterImage& image);

}  // namespace scalepaint
