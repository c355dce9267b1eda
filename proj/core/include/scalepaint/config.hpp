#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scalepaint/optimize.hpp"
#include "scalepaint/scale_space.hpp"

namespace scalepaint {

/// Full parameterization of one denoising run. Every field has a default,
/// so an empty config file is valid.
struct PipelineConfig {
  std::vector<BlurParams> schedule{{4.0, 4.0}, {2.0, 2.0}, {1.0, 1.0}};
  double w_g = 0.0;  // gradient-magnitude weight in each pyramid level
  double w_l = 0.0;  // Laplacian weight in each pyramid level
  double tau_seg = 0.05;
  int min_area = 16;
  double tau_new = 0.05;
  double diff_threshold = 0.1;
  int k_init = 4;
  int max_refinements_per_component = 3;
  double gamma_decay = 0.7;  // softness multiplier applied after each scale
  OptimConfig optim;
  std::optional<std::filesystem::path> dump_dir;

  /// Throws ConfigError on any out-of-range value.
  void validate() const;
};

/// Parses `key = value` lines; `#` starts a comment. Unknown keys and
/// malformed values raise ConfigError. The result is validated.
PipelineConfig parse_config(std::string_view text);

/// Reads and parses a config file. Throws IoError if unreadable.
PipelineConfig load_config(const std::filesystem::path& path);

/// Serializes to the same `key = value` format parse_config reads.
std::string format_config(const PipelineConfig& cfg);

}  // namespace scalepaint
