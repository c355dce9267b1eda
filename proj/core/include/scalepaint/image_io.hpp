#pragma once

#include <filesystem>

#include "scalepaint/image.hpp"

namespace scalepaint {

/// Loads an 8-bit PNG, PGM (P5) or PPM (P6) file. Values are divided by 255;
/// grayscale data is replicated to three channels. Throws IoError.
RasterImage load_image(const std::filesystem::path& path);

/// Writes an 8-bit image; the format follows the extension (.png, .pgm,
/// .ppm). PNG output is grayscale when every pixel's channels agree within
/// 1/255. Throws IoError.
void save_image(const RasterImage& image, const std::filesystem::path& path);

/// True when every pixel's channels agree within 1/255.
bool is_grayscale(const RasterImage& image);

}  // namespace scalepaint
