#include "scalepaint/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "scalepaint/errors.hpp"

namespace scalepaint {

namespace {

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s(buf);
  if (s == "-0.000") s = "0.000";
  return s;
}

std::string point(Vec2 p) { return fixed3(p.x) + ' ' + fixed3(p.y); }

}  // namespace

std::string hex_color(const Color& c) {
  char buf[8];
  auto q = [](double v) { return static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); };
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", q(c[0]), q(c[1]), q(c[2]));
  return buf;
}

std::string export_svg(const VectorScene& scene, int width, int height) {
  if (width <= 0 || height <= 0) throw InvalidInput("export_svg: dimensions must be positive");
  const std::string w = std::to_string(width);
  const std::string h = std::to_string(height);
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + w +
         "\" height=\"" + h + "\" viewBox=\"0 0 " + w + ' ' + h + "\">\n";
  out += "  <rect x=\"0\" y=\"0\" width=\"" + w + "\" height=\"" + h + "\" fill=\"" +
         hex_color(scene.background) + "\"/>\n";
  for (const auto& path : scene.paths) {
    out += "  <path d=\"M " + point(path.segment(0).p0);
    for (int i = 0; i < path.segment_count(); ++i) {
      const auto s = path.segment(i);
      out += " C " + point(s.p1) + ' ' + point(s.p2) + ' ' + point(s.p3);
    }
    out += " Z\" fill=\"" + hex_color(path.fill) + "\" fill-rule=\"evenodd\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace scalepaint
