#pragma once

#include <cstdint>
#include <vector>

#include "scalepaint/image.hpp"

namespace scalepaint {

struct BoundingBox {
  int x_min = 0;
  int y_min = 0;
  int x_max = -1;  // inclusive
  int y_max = -1;  // inclusive

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// A 4-connected region of similar color.
struct Component {
  int id = 0;
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> mask;  // row-major, 1 = member
  int area = 0;
  BoundingBox bbox;
  Color mean_color{0.0, 0.0, 0.0};
  int source_level = 0;

  bool contains(int x, int y) const {
    return mask[static_cast<std::size_t>(y) * width + x] != 0;
  }
};

/// Component ids in paint order: larger area first, ties by ascending id.
using ComponentSchedule = std::vector<int>;

struct SegmentParams {
  double tau_seg = 0.05;  // mean-channel l1 tolerance against the running mean
  int min_area = 16;
};

/// Raster-order region growing with 4-connectivity. A pixel joins a region
/// when its mean-channel l1 distance to the region's running mean color is at
/// most tau_seg. Regions smaller than min_area are dropped. Surviving regions
/// get consecutive ids from first_id in seed order.
std::vector<Component> segment_components(const RasterImage& image, double tau_seg,
                                          int min_area, int source_level = 0,
                                          int first_id = 0);

/// Mean over mask pixels and channels of |redrawn - reference|. Throws
/// InvalidInput on an empty mask or mismatched dimensions.
double component_diff(const Component& component, const RasterImage& redrawn,
                      const RasterImage& reference);

ComponentSchedule schedule_components(const std::vector<Component>& components);

/// Pixels where the mean-channel |level - render| exceeds tau_new, as a
/// row-major 0/1 mask.
std::vector<std::uint8_t> residual_mask(const RasterImage& level_image,
                                        const RasterImage& render, double tau_new);

/// Components of the under-explained region: region growing on level_image
/// restricted to the residual mask. When restrict_to is non-empty it is
/// intersected with the residual mask first.
std::vector<Component> new_components_at_scale(
    const RasterImage& level_image, const RasterImage& existing_scene_render,
    double tau_seg, int min_area, double tau_new, int source_level = 0,
    int first_id = 0, const std::vector<std::uint8_t>& restrict_to = {});

/// Color-coded label map for debugging; unlabeled pixels are black.
RasterImage label_map(const std::vector<Component>& components, int width, int height);

}  // namespace scalepaint
