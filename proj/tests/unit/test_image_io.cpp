#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "scalepaint/errors.hpp"
#include "scalepaint/image_io.hpp"

using namespace scalepaint;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / "scalepaint_io_test") {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

RasterImage quantized(const RasterImage& img) {
  RasterImage out = img;
  for (double& v : out.data()) v = std::round(v * 255.0) / 255.0;
  return out;
}

}  // namespace

TEST_CASE("image round trips") {
  TempDir dir;
  const auto color = quantized(testing::random_image(13, 7, 1));
  RasterImage gray(9, 11);
  const auto g = testing::random_image(9, 11, 2);
  for (int y = 0; y < 11; ++y)
    for (int x = 0; x < 9; ++x) {
      const double v = std::round(g.at(x, y, 0) * 255.0) / 255.0;
      gray.set_pixel(x, y, {v, v, v});
    }
  CHECK(!is_grayscale(color));
  CHECK(is_grayscale(gray));

  for (const char* ext : {".png", ".ppm"}) {
    const auto file = dir.path / (std::string("color") + ext);
    save_image(color, file);
    const auto back = load_image(file);
    CHECK(testing::max_abs_diff(back, color) < 1e-12);
  }
  for (const char* ext : {".png", ".pgm"}) {
    const auto file = dir.path / (std::string("gray") + ext);
    save_image(gray, file);
    const auto back = load_image(file);
    CHECK(testing::max_abs_diff(back, gray) < 1e-12);
  }
}

TEST_CASE("out-of-range values are clamped on save") {
  TempDir dir;
  RasterImage img(2, 1);
  img.set_pixel(0, 0, {-0.5, 1.5, 0.5});
  img.set_pixel(1, 0, {0.0, 1.0, 0.25});
  save_image(img, dir.path / "c.png");
  const auto back = load_image(dir.path / "c.png");
  CHECK(back.at(0, 0, 0) == 0.0);
  CHECK(back.at(0, 0, 1) == 1.0);
}

TEST_CASE("image I/O errors") {
  TempDir dir;
  CHECK_THROWS_AS(load_image(dir.path / "missing.png"), IoError);
  {
    std::ofstream(dir.path / "junk.png") << "not an image";
  }
  CHECK_THROWS_AS(load_image(dir.path / "junk.png"), IoError);
  {
    std::ofstream(dir.path / "short.pgm", std::ios::binary) << "P5\n4 4\n255\n\x01\x02";
  }
  CHECK_THROWS_AS(load_image(dir.path / "short.pgm"), IoError);
  {
    std::ofstream(dir.path / "deep.pgm", std::ios::binary) << "P5\n1 1\n65535\n\x01\x02";
  }
  CHECK_THROWS_AS(load_image(dir.path / "deep.pgm"), IoError);
  CHECK_THROWS_AS(save_image(RasterImage(2, 2), dir.path / "x.bmp"), IoError);
  CHECK_THROWS_AS(save_image(RasterImage(2, 2), dir.path / "no" / "dir" / "x.png"), IoError);
}

TEST_CASE("PGM header comments are skipped") {
  TempDir dir;
  {
    std::ofstream out(dir.path / "c.pgm", std::ios::binary);
    out << "P5\n# a comment\n2 1\n# another\n255\n";
    out.put(static_cast<char>(0));
    out.put(static_cast<char>(255));
  }
  const auto img = load_image(dir.path / "c.pgm");
  CHECK(img.width() == 2);
  CHECK(img.at(0, 0, 2) == 0.0);
  CHECK(img.at(1, 0, 0) == 1.0);
}
