#include "scalepaint/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "scalepaint/errors.hpp"

namespace scalepaint {

namespace {

std::uint8_t quantize(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

RasterImage load_png(const std::filesystem::path& path) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) {
    throw IoError("cannot read PNG '" + path.string() + "': " + png.message);
  }
  png.format = PNG_FORMAT_RGB;
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, buffer.data(), 0, nullptr)) {
    png_image_free(&png);
    throw IoError("cannot decode PNG '" + path.string() + "': " + png.message);
  }
  RasterImage img(static_cast<int>(png.width), static_cast<int>(png.height));
  auto data = img.data();
  for (std::size_t i = 0; i < buffer.size(); ++i) data[i] = buffer[i] / 255.0;
  return img;
}

void save_png(const RasterImage& image, const std::filesystem::path& path) {
  const bool gray = is_grayscale(image);
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width());
  png.height = static_cast<png_uint_32>(image.height());
  png.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;

  std::vector<png_byte> buffer;
  buffer.reserve(PNG_IMAGE_SIZE(png));
  const auto data = image.data();
  for (std::size_t i = 0; i < data.size(); i += 3) {
    if (gray) {
      buffer.push_back(quantize(data[i]));
    } else {
      buffer.push_back(quantize(data[i]));
      buffer.push_back(quantize(data[i + 1]));
      buffer.push_back(quantize(data[i + 2]));
    }
  }
  if (!png_image_write_to_file(&png, path.c_str(), 0, buffer.data(), 0, nullptr)) {
    throw IoError("cannot write PNG '" + path.string() + "': " + png.message);
  }
}

// Netpbm headers allow comments and arbitrary whitespace between tokens.
int read_pnm_int(std::istream& in) {
  char c;
  while (in.get(c)) {
    if (c == '#') {
      std::string skip;
      std::getline(in, skip);
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      in.unget();
      break;
    }
  }
  int value = -1;
  in >> value;
  if (!in) throw IoError("malformed netpbm header");
  return value;
}

RasterImage load_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6')) {
    throw IoError("'" + path.string() + "': only binary PGM (P5) and PPM (P6) are supported");
  }
  const int channels = magic[1] == '5' ? 1 : 3;
  const int w = read_pnm_int(in);
  const int h = read_pnm_int(in);
  const int maxval = read_pnm_int(in);
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 255) {
    throw IoError("'" + path.string() + "': unsupported netpbm dimensions or depth");
  }
  in.get();  // single whitespace byte before the raster

  std::vector<unsigned char> buffer(static_cast<std::size_t>(w) * h * channels);
  in.read(reinterpret_cast<char*>(buffer.data()), static_cast<std::streamsize>(buffer.size()));
  if (in.gcount() != static_cast<std::streamsize>(buffer.size())) {
    throw IoError("'" + path.string() + "': truncated raster");
  }
  RasterImage img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = (static_cast<std::size_t>(y) * w + x) * channels;
      for (int c = 0; c < 3; ++c) {
        img.at(x, y, c) = buffer[i + (channels == 1 ? 0 : c)] / static_cast<double>(maxval);
      }
    }
  }
  return img;
}

void save_pnm(const RasterImage& image, const std::filesystem::path& path, bool gray) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << (gray ? "P5" : "P6") << '\n'
      << image.width() << ' ' << image.height() << '\n'
      << 255 << '\n';
  std::vector<unsigned char> buffer;
  buffer.reserve(image.pixel_count() * (gray ? 1 : 3));
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (gray) {
        buffer.push_back(quantize(image.at(x, y, 0)));
      } else {
        for (int c = 0; c < 3; ++c) buffer.push_back(quantize(image.at(x, y, c)));
      }
    }
  }
  out.write(reinterpret_cast<const char*>(buffer.data()),
            static_cast<std::streamsize>(buffer.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

bool is_grayscale(const RasterImage& image) {
  constexpr double tol = 1.0 / 255.0;
  const auto data = image.data();
  for (std::size_t i = 0; i < data.size(); i += 3) {
    if (std::abs(data[i] - data[i + 1]) > tol || std::abs(data[i] - data[i + 2]) > tol) {
      return false;
    }
  }
  return true;
}

RasterImage load_image(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") return load_pnm(path);
  return load_png(path);
}

void save_image(const RasterImage& image, const std::filesystem::path& path) {
  if (image.empty()) throw IoError("refusing to write an empty image");
  const std::string ext = lower_extension(path);
  if (ext == ".pgm") {
    save_pnm(image, path, true);
  } else if (ext == ".ppm") {
    save_pnm(image, path, false);
  } else if (ext == ".png") {
    save_png(image, path);
  } else {
    throw IoError("unsupported output extension '" + ext + "'");
  }
}

}  // namespace scalepaint
