#pragma once

#include <cstdint>

#include "scalepaint/image.hpp"

namespace scalepaint {

/// Adds i.i.d. Gaussian noise with std sigma_255 / 255 to every sample,
/// drawn from a generator seeded with `seed`, then clamps to [0, 1].
RasterImage add_noise(const RasterImage& image, double sigma_255, std::uint64_t seed);

/// Piecewise-constant test image: three nested rectangles with intensities
/// 0.2 (full frame), 0.5 and 0.8. Requires size >= 16.
RasterImage make_phantom(int size);

}  // namespace scalepaint
