#pragma once

#include <vector>

#include "scalepaint/bezier.hpp"
#include "scalepaint/image.hpp"
#include "scalepaint/losses.hpp"

namespace scalepaint {

/// Soft coverage: alpha = sigmoid(-signed_distance / gamma).
struct RasterSettings {
  double gamma = 1.0;            // edge softness in pixels, > 0
  int samples_per_segment = 16;  // flattening density for distance and inside tests
};

/// Pixels farther than this many gammas outside a path's bounds get zero
/// coverage (the sigmoid there is below 1e-13).
inline constexpr double kCoverageCutoff = 30.0;

struct PathGradient {
  std::vector<Vec2> points;  // one per stored control point
  Color fill{0.0, 0.0, 0.0};
};

/// Gradient of the composite loss, mirroring the scene's layout.
struct SceneGradients {
  Color background{0.0, 0.0, 0.0};
  std::vector<PathGradient> paths;
};

struct LossBreakdown {
  double mse = 0.0;   // weighted MSE
  double xing = 0.0;  // unweighted sum of path penalties
  double total = 0.0; // mse + lambda * xing
};

/// Per-path coverage for one path over the full frame.
RasterImage coverage_map(const ClosedBezierPath& path, int width, int height,
                         const RasterSettings& settings = {});

/// Painter's compositing in list order over the background; pixel centers
/// sit at (x + 0.5, y + 0.5). Throws InvalidInput for gamma <= 0.
RasterImage render_scene(const VectorScene& scene, int width, int height,
                         const RasterSettings& settings = {});

struct SceneEvaluation {
  RasterImage rendered;
  LossBreakdown loss;
  SceneGradients gradients;  // empty unless requested
};

/// Renders, scores against target (weighted MSE + lambda * xing) and
/// optionally back-propagates. Pixel rows are processed in parallel and
/// reduced in row order, so results do not depend on the thread count.
SceneEvaluation evaluate_scene(const VectorScene& scene, const RasterImage& target,
                               const WeightMap& weights, double lambda,
                               const RasterSettings& settings, bool with_gradients);

struct RenderWithLoss {
  RasterImage rendered;
  double loss = 0.0;
};

RenderWithLoss render_with_loss(const VectorScene& scene, const RasterImage& target,
                                const WeightMap& weights, double lambda,
                                const RasterSettings& settings = {});

SceneGradients scene_gradients(const VectorScene& scene, const RasterImage& target,
                               const WeightMap& weights, double lambda,
                               const RasterSettings& settings = {});

}  // namespace scalepaint
