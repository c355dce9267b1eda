#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "scalepaint/bezier.hpp"
#include "scalepaint/image.hpp"
#include "scalepaint/losses.hpp"
#include "scalepaint/soft_raster.hpp"

namespace scalepaint {

struct OptimConfig {
  double alpha = 0.1;    // learning rate for control points (pixels)
  double beta = 0.01;    // learning rate for fill and background colors
  double lambda = 0.01;  // Xing penalty weight
  int t_max = 300;       // Adam steps per scale
  double gamma = 1.0;    // rasterizer softness
  int samples_per_segment = 16;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::uint64_t seed = 0;

  /// Throws ConfigError when a field is out of range. alpha = beta = 0 is
  /// accepted (it freezes the scene), negative rates are not.
  void validate() const;

  RasterSettings raster() const { return {gamma, samples_per_segment}; }
};

/// Adam moments for a flat parameter vector.
class AdamState {
 public:
  AdamState(std::size_t size, double beta1, double beta2, double epsilon);

  /// One Adam step on params with per-entry learning rates.
  void step(std::span<double> params, std::span<const double> grad,
            std::span<const double> rates);

  std::size_t steps() const { return t_; }

 private:
  double beta1_, beta2_, epsilon_;
  std::size_t t_ = 0;
  std::vector<double> m_, v_;
};

struct LossSample {
  double mse = 0.0;
  double xing = 0.0;
  double total = 0.0;
};

struct OptimizeResult {
  VectorScene scene;
  std::vector<LossSample> trace;  // loss of the iterate each step started from
  LossSample initial;             // loss of the input scene
  LossSample final_loss;          // loss of the returned scene
};

/// Runs cfg.t_max Adam steps on every control point and fill color (rate
/// alpha for points, beta for colors and background). Paths whose entry in
/// frozen is nonzero keep their parameters. Colors are clamped to [0, 1]
/// after each step. Returns the lowest-loss iterate seen, which is never
/// worse than the input.
OptimizeResult optimize_scale(const VectorScene& scene, const RasterImage& target,
                              const WeightMap& weights, const OptimConfig& cfg,
                              std::span<const std::uint8_t> frozen = {});

}  // namespace scalepaint
