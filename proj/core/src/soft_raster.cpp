#include "scalepaint/soft_raster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scalepaint/errors.hpp"
#include "scalepaint/parallel.hpp"

namespace scalepaint {

namespace {

struct PreparedPath {
  std::vector<PolylineVertex> tess;
  std::vector<Vec2> vertices;
  double x_min = 0.0, y_min = 0.0, x_max = 0.0, y_max = 0.0;  // culling bounds
};

std::vector<PreparedPath> prepare(const VectorScene& scene, const RasterSettings& settings) {
  if (!(settings.gamma > 0.0)) throw InvalidInput("soft raster: gamma must be positive");
  if (settings.samples_per_segment < 2) {
    throw InvalidInput("soft raster: need at least 2 samples per segment");
  }
  const double pad = kCoverageCutoff * settings.gamma;
  std::vector<PreparedPath> out(scene.paths.size());
  for (std::size_t i = 0; i < scene.paths.size(); ++i) {
    auto& p = out[i];
    p.tess = tessellate(scene.paths[i], settings.samples_per_segment);
    p.vertices.reserve(p.tess.size());
    double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
    double x1 = -x0, y1 = -x0;
    for (const auto& v : p.tess) {
      p.vertices.push_back(v.position);
      x0 = std::min(x0, v.position.x);
      y0 = std::min(y0, v.position.y);
      x1 = std::max(x1, v.position.x);
      y1 = std::max(y1, v.position.y);
    }
    p.x_min = x0 - pad;
    p.y_min = y0 - pad;
    p.x_max = x1 + pad;
    p.y_max = y1 + pad;
  }
  return out;
}

bool culled(const PreparedPath& p, Vec2 q) {
  return q.x < p.x_min || q.x > p.x_max || q.y < p.y_min || q.y > p.y_max;
}

double coverage(double signed_dist, double gamma) {
  return 1.0 / (1.0 + std::exp(signed_dist / gamma));
}

void check_target(const RasterImage& target, const WeightMap& weights) {
  if (target.empty()) throw InvalidInput("soft raster: empty target");
  if (weights.width() != target.width() || weights.height() != target.height()) {
    throw InvalidInput("soft raster: weight map does not match the target");
  }
}

// Per-row accumulators, reduced in row order afterwards.
struct RowAccum {
  double sq_sum = 0.0;
  SceneGradients grad;
};

SceneGradients zero_gradients(const VectorScene& scene) {
  SceneGradients g;
  g.paths.resize(scene.paths.size());
  for (std::size_t i = 0; i < scene.paths.size(); ++i) {
    g.paths[i].points.assign(scene.paths[i].point_count(), Vec2{});
  }
  return g;
}

void add_into(SceneGradients& dst, const SceneGradients& src) {
  for (int c = 0; c < 3; ++c) dst.background[c] += src.background[c];
  for (std::size_t i = 0; i < dst.paths.size(); ++i) {
    for (int c = 0; c < 3; ++c) dst.paths[i].fill[c] += src.paths[i].fill[c];
    auto& d = dst.paths[i].points;
    const auto& s = src.paths[i].points;
    for (std::size_t j = 0; j < d.size(); ++j) d[j] += s[j];
  }
}

}  // namespace

RasterImage coverage_map(const ClosedBezierPath& path, int width, int height,
                         const RasterSettings& settings) {
  VectorScene scene;
  scene.paths.push_back(path);
  const auto prepared = prepare(scene, settings);
  RasterImage out(width, height, 0.0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const Vec2 q{x + 0.5, y + 0.5};
      if (culled(prepared[0], q)) continue;
      const auto d = query_polyline(prepared[0].vertices, q);
      const double a = coverage(d.signed_distance(), settings.gamma);
      out.set_pixel(x, y, {a, a, a});
    }
  }
  return out;
}

RasterImage render_scene(const VectorScene& scene, int width, int height,
                         const RasterSettings& settings) {
  const auto prepared = prepare(scene, settings);
  RasterImage out(width, height, scene.background);
  detail::parallel_blocks(static_cast<std::size_t>(height), [&](std::size_t row) {
    const int y = static_cast<int>(row);
    for (int x = 0; x < width; ++x) {
      const Vec2 q{x + 0.5, y + 0.5};
      Color c = scene.background;
      for (std::size_t i = 0; i < prepared.size(); ++i) {
        if (culled(prepared[i], q)) continue;
        const double a =
            coverage(query_polyline(prepared[i].vertices, q).signed_distance(), settings.gamma);
        const Color& f = scene.paths[i].fill;
        for (int k = 0; k < 3; ++k) c[k] = a * f[k] + (1.0 - a) * c[k];
      }
      out.set_pixel(x, y, c);
    }
  });
  return out;
}

SceneEvaluation evaluate_scene(const VectorScene& scene, const RasterImage& target,
                               const WeightMap& weights, double lambda,
                               const RasterSettings& settings, bool with_gradients) {
  check_target(target, weights);
  const auto prepared = prepare(scene, settings);
  const int width = target.width();
  const int height = target.height();
  const std::size_t npaths = scene.paths.size();
  const double gamma = settings.gamma;
  // d(loss)/d(rendered) = 2 w r / (3 N)
  const double grad_scale = 2.0 / (3.0 * static_cast<double>(target.pixel_count()));

  SceneEvaluation result;
  result.rendered = RasterImage(width, height);
  std::vector<RowAccum> rows(static_cast<std::size_t>(height));

  detail::parallel_blocks(static_cast<std::size_t>(height), [&](std::size_t row) {
    const int y = static_cast<int>(row);
    RowAccum& acc = rows[row];
    if (with_gradients) acc.grad = zero_gradients(scene);

    std::vector<Color> under(npaths);       // color beneath path i
    std::vector<double> alpha(npaths);
    std::vector<PolylineDistance> hit(npaths);
    std::vector<std::uint8_t> active(npaths);

    for (int x = 0; x < width; ++x) {
      const Vec2 q{x + 0.5, y + 0.5};
      Color c = scene.background;
      for (std::size_t i = 0; i < npaths; ++i) {
        under[i] = c;
        active[i] = !culled(prepared[i], q);
        if (!active[i]) {
          alpha[i] = 0.0;
          continue;
        }
        hit[i] = query_polyline(prepared[i].vertices, q);
        const double a = coverage(hit[i].signed_distance(), gamma);
        alpha[i] = a;
        const Color& f = scene.paths[i].fill;
        for (int k = 0; k < 3; ++k) c[k] = a * f[k] + (1.0 - a) * c[k];
      }
      result.rendered.set_pixel(x, y, c);

      const double w = weights.at(x, y);
      Color g;
      for (int k = 0; k < 3; ++k) {
        const double r = c[k] - target.at(x, y, k);
        acc.sq_sum += w * r * r;
        g[k] = grad_scale * w * r;
      }
      if (!with_gradients) continue;

      for (std::size_t i = npaths; i-- > 0;) {
        if (!active[i]) continue;
        const double a = alpha[i];
        const Color& f = scene.paths[i].fill;
        auto& pg = acc.grad.paths[i];
        double dalpha = 0.0;
        for (int k = 0; k < 3; ++k) {
          pg.fill[k] += a * g[k];
          dalpha += g[k] * (f[k] - under[i][k]);
          g[k] *= (1.0 - a);
        }
        const auto& h = hit[i];
        if (h.distance <= 0.0) continue;
        // alpha = sigmoid(-s / gamma), s = +-d, d = |q - nearest|
        const double dsd = -a * (1.0 - a) / gamma * dalpha;
        const double dd = h.inside ? -dsd : dsd;
        if (dd == 0.0) continue;
        const Vec2 dir = (1.0 / h.distance) * (q - h.nearest);  // d(d)/d(nearest) = -dir
        const std::size_t m = prepared[i].tess.size();
        const std::size_t ia = h.edge;
        const std::size_t ib = (h.edge + 1 == m) ? 0 : h.edge + 1;
        const Vec2 ga = (-dd * (1.0 - h.u)) * dir;
        const Vec2 gb = (-dd * h.u) * dir;
        const auto& path = scene.paths[i];
        for (const auto& [vi, gv] : {std::pair{ia, ga}, std::pair{ib, gb}}) {
          const auto& v = prepared[i].tess[vi];
          for (int j = 0; j < 4; ++j) {
            if (v.weights[j] == 0.0) continue;
            pg.points[path.point_index(v.segment, j)] += v.weights[j] * gv;
          }
        }
      }
      for (int k = 0; k < 3; ++k) acc.grad.background[k] += g[k];
    }
  });

  double sq = 0.0;
  for (const auto& r : rows) sq += r.sq_sum;
  result.loss.mse = sq / (3.0 * static_cast<double>(target.pixel_count()));

  if (with_gradients) {
    result.gradients = zero_gradients(scene);
    for (const auto& r : rows) add_into(result.gradients, r.grad);
  }

  double xing = 0.0;
  for (std::size_t i = 0; i < npaths; ++i) {
    if (with_gradients && lambda != 0.0) {
      xing += xing_loss_gradient(scene.paths[i], lambda, result.gradients.paths[i].points);
    } else {
      xing += xing_loss(scene.paths[i]);
    }
  }
  result.loss.xing = xing;
  result.loss.total = result.loss.mse + lambda * xing;
  return result;
}

RenderWithLoss render_with_loss(const VectorScene& scene, const RasterImage& target,
                                const WeightMap& weights, double lambda,
                                const RasterSettings& settings) {
  auto eval = evaluate_scene(scene, target, weights, lambda, settings, false);
  return {std::move(eval.rendered), eval.loss.total};
}

SceneGradients scene_gradients(const VectorScene& scene, const RasterImage& target,
                               const WeightMap& weights, double lambda,
                               const RasterSettings& settings) {
  return evaluate_scene(scene, target, weights, lambda, settings, true).gradients;
}

}  // namespace scalepaint
