#include "scalepaint/optimize.hpp"

#include <algorithm>
#include <cmath>

#include "scalepaint/errors.hpp"

namespace scalepaint {

void OptimConfig::validate() const {
  if (!(alpha >= 0.0) || !(beta >= 0.0)) throw ConfigError("learning rates must be >= 0");
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
  if (t_max < 0) throw ConfigError("t_max must be >= 0");
  if (!(gamma > 0.0)) throw ConfigError("gamma must be > 0");
  if (samples_per_segment < 8) throw ConfigError("samples_per_segment must be >= 8");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
    throw ConfigError("Adam betas must lie in [0, 1)");
  }
  if (!(adam_epsilon > 0.0)) throw ConfigError("Adam epsilon must be > 0");
}

AdamState::AdamState(std::size_t size, double beta1, double beta2, double epsilon)
    : beta1_(beta1), beta2_(beta2), epsilon_(epsilon), m_(size, 0.0), v_(size, 0.0) {}

void AdamState::step(std::span<double> params, std::span<const double> grad,
                     std::span<const double> rates) {
  if (params.size() != m_.size() || grad.size() != m_.size() || rates.size() != m_.size()) {
    throw InvalidInput("AdamState::step: size mismatch");
  }
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
    const double mhat = m_[i] / c1;
    const double vhat = v_[i] / c2;
    params[i] -= rates[i] * mhat / (std::sqrt(vhat) + epsilon_);
  }
}

namespace {

// Flat layout: background rgb, then per path its points (x, y) and fill rgb.
std::vector<double> pack(const VectorScene& scene) {
  std::vector<double> out(scene.background.begin(), scene.background.end());
  for (const auto& path : scene.paths) {
    for (const Vec2& p : path.points()) {
      out.push_back(p.x);
      out.push_back(p.y);
    }
    out.insert(out.end(), path.fill.begin(), path.fill.end());
  }
  return out;
}

std::vector<double> pack(const SceneGradients& g) {
  std::vector<double> out(g.background.begin(), g.background.end());
  for (const auto& path : g.paths) {
    for (const Vec2& p : path.points) {
      out.push_back(p.x);
      out.push_back(p.y);
    }
    out.insert(out.end(), path.fill.begin(), path.fill.end());
  }
  return out;
}

void unpack(std::span<const double> flat, VectorScene& scene) {
  std::size_t i = 0;
  for (int c = 0; c < 3; ++c) scene.background[c] = flat[i++];
  for (auto& path : scene.paths) {
    for (Vec2& p : path.points()) {
      p.x = flat[i++];
      p.y = flat[i++];
    }
    for (int c = 0; c < 3; ++c) path.fill[c] = flat[i++];
  }
}

void clamp_colors(VectorScene& scene) {
  for (double& c : scene.background) c = std::clamp(c, 0.0, 1.0);
  for (auto& path : scene.paths) {
    for (double& c : path.fill) c = std::clamp(c, 0.0, 1.0);
  }
}

LossSample to_sample(const LossBreakdown& l) { return {l.mse, l.xing, l.total}; }

}  // namespace

OptimizeResult optimize_scale(const VectorScene& scene, const RasterImage& target,
                              const WeightMap& weights, const OptimConfig& cfg,
                              std::span<const std::uint8_t> frozen) {
  cfg.validate();
  if (!frozen.empty() && frozen.size() != scene.paths.size()) {
    throw InvalidInput("optimize_scale: frozen mask does not match the path count");
  }
  const RasterSettings raster = cfg.raster();

  OptimizeResult result;
  result.scene = scene;
  VectorScene current = scene;

  // Per-parameter learning rates; frozen paths get zero.
  std::vector<double> rates(3, cfg.beta);
  for (std::size_t i = 0; i < scene.paths.size(); ++i) {
    const bool fixed = !frozen.empty() && frozen[i] != 0;
    rates.insert(rates.end(), 2 * scene.paths[i].point_count(), fixed ? 0.0 : cfg.alpha);
    rates.insert(rates.end(), 3, fixed ? 0.0 : cfg.beta);
  }

  AdamState adam(rates.size(), cfg.adam_beta1, cfg.adam_beta2, cfg.adam_epsilon);
  std::vector<double> params = pack(current);
  double best = 0.0;

  result.trace.reserve(static_cast<std::size_t>(cfg.t_max));
  for (int it = 0; it < cfg.t_max; ++it) {
    auto eval = evaluate_scene(current, target, weights, cfg.lambda, raster, true);
    const LossSample sample = to_sample(eval.loss);
    if (it == 0) {
      result.initial = sample;
      result.final_loss = sample;
      best = sample.total;
    } else if (sample.total < best) {
      best = sample.total;
      result.scene = current;
      result.final_loss = sample;
    }
    result.trace.push_back(sample);

    const auto grad = pack(eval.gradients);
    adam.step(params, grad, rates);
    unpack(params, current);
    clamp_colors(current);
    params = pack(current);
  }

  if (cfg.t_max == 0) {
    const auto eval = evaluate_scene(current, target, weights, cfg.lambda, raster, false);
    result.initial = result.final_loss = to_sample(eval.loss);
    return result;
  }

  const auto last = evaluate_scene(current, target, weights, cfg.lambda, raster, false);
  if (last.loss.total < best) {
    result.scene = std::move(current);
    result.final_loss = to_sample(last.loss);
  }
  return result;
}

}  // namespace scalepaint
