#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scalepaint/bezier.hpp"
#include "scalepaint/config.hpp"
#include "scalepaint/image.hpp"
#include "scalepaint/metrics.hpp"
#include "scalepaint/optimize.hpp"
#include "scalepaint/segmentation.hpp"

namespace scalepaint {

/// Bookkeeping for one scene path: the component it redraws and its
/// refinement state.
struct PathRecord {
  Component component;
  int refinements = 0;
  bool frozen = false;
  bool reinitialized = false;
  std::optional<double> diff_at_freeze;
  std::optional<int> frozen_at_scale;
};

/// What happened at one pyramid level.
struct ScaleRecord {
  int level = 0;
  double gamma = 0.0;
  int new_components = 0;
  int paths_before = 0;      // paths entering the level (before new ones are appended)
  int paths_after = 0;       // paths after refinement / re-initialization
  int accepted = 0;
  int refined = 0;
  int reinitialized = 0;
  double loss_before = 0.0;  // incoming scene (with new paths) against this level
  double loss_after = 0.0;   // optimized scene against this level
  std::vector<LossSample> trace;
};

struct RunArtifacts {
  RasterImage denoised;
  VectorScene scene;
  std::vector<PathRecord> paths;  // parallel to scene.paths
  std::vector<ScaleRecord> scales;
  std::vector<std::string> warnings;

  /// Number of paths after each scale; non-decreasing by construction.
  std::vector<int> component_counts() const;
};

/// Coarse-to-fine vector redrawing of a noisy image. Throws ConfigError for
/// an invalid config; module errors propagate.
RunArtifacts denoise(const RasterImage& input, const PipelineConfig& cfg);

}  // namespace scalepaint
