#include "scalepaint/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "scalepaint/errors.hpp"

namespace scalepaint {

namespace {

double l1_mean(const Color& a, const Color& b) {
  return (std::abs(a[0] - b[0]) + std::abs(a[1] - b[1]) + std::abs(a[2] - b[2])) / 3.0;
}

// Region growing over the pixels where `allowed` is set (all pixels when
// empty). Ids are consecutive over the regions that survive the area filter.
std::vector<Component> grow_regions(const RasterImage& image, double tau_seg, int min_area,
                                    int source_level, int first_id,
                                    const std::vector<std::uint8_t>& allowed) {
  if (!(tau_seg > 0.0)) throw InvalidInput("segment_components: tau_seg must be positive");
  if (min_area < 1) throw InvalidInput("segment_components: min_area must be >= 1");

  const int w = image.width();
  const int h = image.height();
  const std::size_t n = image.pixel_count();
  std::vector<std::uint8_t> visited(n, 0);
  if (!allowed.empty()) {
    if (allowed.size() != n) throw InvalidInput("segment_components: mask size mismatch");
    for (std::size_t i = 0; i < n; ++i) visited[i] = allowed[i] ? 0 : 1;
  }

  std::vector<Component> out;
  int next_id = first_id;
  std::vector<std::size_t> members;
  std::deque<std::size_t> frontier;
  constexpr int kDx[4] = {1, -1, 0, 0};
  constexpr int kDy[4] = {0, 0, 1, -1};

  for (std::size_t seed = 0; seed < n; ++seed) {
    if (visited[seed]) continue;
    visited[seed] = 1;
    members.clear();
    frontier.clear();
    frontier.push_back(seed);

    const int sx = static_cast<int>(seed % w);
    const int sy = static_cast<int>(seed / w);
    Color sum = image.pixel(sx, sy);
    Color running = sum;
    members.push_back(seed);

    while (!frontier.empty()) {
      const std::size_t p = frontier.front();
      frontier.pop_front();
      const int px = static_cast<int>(p % w);
      const int py = static_cast<int>(p / w);
      for (int d = 0; d < 4; ++d) {
        const int qx = px + kDx[d];
        const int qy = py + kDy[d];
        if (qx < 0 || qy < 0 || qx >= w || qy >= h) continue;
        const std::size_t q = static_cast<std::size_t>(qy) * w + qx;
        if (visited[q]) continue;
        const Color c = image.pixel(qx, qy);
        if (l1_mean(c, running) > tau_seg) continue;
        visited[q] = 1;
        members.push_back(q);
        frontier.push_back(q);
        for (int k = 0; k < 3; ++k) sum[k] += c[k];
        const double count = static_cast<double>(members.size());
        for (int k = 0; k < 3; ++k) running[k] = sum[k] / count;
      }
    }

    if (static_cast<int>(members.size()) < min_area) continue;

    Component comp;
    comp.id = next_id++;
    comp.width = w;
    comp.height = h;
    comp.mask.assign(n, 0);
    comp.area = static_cast<int>(members.size());
    comp.bbox = {w, h, -1, -1};
    comp.source_level = source_level;
    Color mean{0.0, 0.0, 0.0};
    for (std::size_t p : members) {
      comp.mask[p] = 1;
      const int px = static_cast<int>(p % w);
      const int py = static_cast<int>(p / w);
      comp.bbox.x_min = std::min(comp.bbox.x_min, px);
      comp.bbox.y_min = std::min(comp.bbox.y_min, py);
      comp.bbox.x_max = std::max(comp.bbox.x_max, px);
      comp.bbox.y_max = std::max(comp.bbox.y_max, py);
      const Color c = image.pixel(px, py);
      for (int k = 0; k < 3; ++k) mean[k] += c[k];
    }
    for (int k = 0; k < 3; ++k) mean[k] /= static_cast<double>(comp.area);
    comp.mean_color = mean;
    out.push_back(std::move(comp));
  }
  return out;
}

}  // namespace

std::vector<Component> segment_components(const RasterImage& image, double tau_seg,
                                          int min_area, int source_level, int first_id) {
  return grow_regions(image, tau_seg, min_area, source_level, first_id, {});
}

double component_diff(const Component& component, const RasterImage& redrawn,
                      const RasterImage& reference) {
  if (!redrawn.same_shape(reference) || redrawn.width() != component.width ||
      redrawn.height() != component.height) {
    throw InvalidInput("component_diff: dimension mismatch");
  }
  double sum = 0.0;
  std::size_t count = 0;
  const auto a = redrawn.data();
  const auto b = reference.data();
  for (std::size_t p = 0; p < component.mask.size(); ++p) {
    if (!component.mask[p]) continue;
    for (int c = 0; c < 3; ++c) sum += std::abs(a[3 * p + c] - b[3 * p + c]);
    ++count;
  }
  if (count == 0) throw InvalidInput("component_diff: empty mask");
  return sum / (3.0 * static_cast<double>(count));
}

ComponentSchedule schedule_components(const std::vector<Component>& components) {
  std::vector<std::size_t> order(components.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (components[a].area != components[b].area) {
      return components[a].area > components[b].area;
    }
    return components[a].id < components[b].id;
  });
  ComponentSchedule ids;
  ids.reserve(order.size());
  for (std::size_t i : order) ids.push_back(components[i].id);
  return ids;
}

std::vector<std::uint8_t> residual_mask(const RasterImage& level_image,
                                        const RasterImage& render, double tau_new) {
  if (!level_image.same_shape(render)) throw InvalidInput("residual_mask: dimension mismatch");
  const auto a = level_image.data();
  const auto b = render.data();
  std::vector<std::uint8_t> mask(level_image.pixel_count(), 0);
  for (std::size_t p = 0; p < mask.size(); ++p) {
    const double r = (std::abs(a[3 * p] - b[3 * p]) + std::abs(a[3 * p + 1] - b[3 * p + 1]) +
                      std::abs(a[3 * p + 2] - b[3 * p + 2])) / 3.0;
    mask[p] = r > tau_new ? 1 : 0;
  }
  return mask;
}

std::vector<Component> new_components_at_scale(
    const RasterImage& level_image, const RasterImage& existing_scene_render,
    double tau_seg, int min_area, double tau_new, int source_level, int first_id,
    const std::vector<std::uint8_t>& restrict_to) {
  auto mask = residual_mask(level_image, existing_scene_render, tau_new);
  if (!restrict_to.empty()) {
    if (restrict_to.size() != mask.size()) {
      throw InvalidInput("new_components_at_scale: restriction mask size mismatch");
    }
    for (std::size_t p = 0; p < mask.size(); ++p) mask[p] &= restrict_to[p];
  }
  if (std::none_of(mask.begin(), mask.end(), [](std::uint8_t m) { return m != 0; })) {
    return {};
  }
  return grow_regions(level_image, tau_seg, min_area, source_level, first_id, mask);
}

RasterImage label_map(const std::vector<Component>& components, int width, int height) {
  RasterImage out(width, height, 0.0);
  for (const auto& comp : components) {
    // Cheap deterministic hash of the id into a saturated color.
    const unsigned h = static_cast<unsigned>(comp.id) * 2654435761u;
    const Color color{0.25 + 0.75 * ((h >> 8) & 0xff) / 255.0,
                      0.25 + 0.75 * ((h >> 16) & 0xff) / 255.0,
                      0.25 + 0.75 * ((h >> 24) & 0xff) / 255.0};
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        if (comp.contains(x, y)) out.set_pixel(x, y, color);
      }
    }
  }
  return out;
}

}  // namespace scalepaint
