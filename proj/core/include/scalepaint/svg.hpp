#pragma once

#include <string>

#include "scalepaint/bezier.hpp"

namespace scalepaint {

/// SVG 1.1 document: a full-frame background rect followed by one
/// `<path fill-rule="evenodd">` per scene path in paint order. Coordinates
/// carry three decimals; fills are #rrggbb.
std::string export_svg(const VectorScene& scene, int width, int height);

/// #rrggbb for a color in [0, 1] (values are clamped and rounded).
std::string hex_color(const Color& c);

}  // namespace scalepaint
