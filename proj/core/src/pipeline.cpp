#include "scalepaint/pipeline.hpp"

#include <algorithm>
#include <map>

#include "scalepaint/errors.hpp"
#include "scalepaint/image_io.hpp"
#include "scalepaint/losses.hpp"
#include "scalepaint/scale_space.hpp"
#include "scalepaint/soft_raster.hpp"

namespace scalepaint {

namespace {

void append_components(std::vector<Component> comps, int k, VectorScene& scene,
                       std::vector<PathRecord>& records) {
  std::map<int, std::size_t> by_id;
  for (std::size_t i = 0; i < comps.size(); ++i) by_id[comps[i].id] = i;
  for (int id : schedule_components(comps)) {
    Component& comp = comps[by_id.at(id)];
    scene.paths.push_back(init_path_for_component(comp, k));
    PathRecord rec;
    rec.component = std::move(comp);
    records.push_back(std::move(rec));
  }
}

int next_component_id(const std::vector<PathRecord>& records) {
  int next = 0;
  for (const auto& r : records) next = std::max(next, r.component.id + 1);
  return next;
}

}  // namespace

std::vector<int> RunArtifacts::component_counts() const {
  std::vector<int> out;
  out.reserve(scales.size());
  for (const auto& s : scales) out.push_back(s.paths_after);
  return out;
}

RunArtifacts denoise(const RasterImage& input, const PipelineConfig& cfg) {
  cfg.validate();
  if (input.empty()) throw InvalidInput("denoise: empty input image");

  const auto pyramid = build_pyramid(input, cfg.schedule, cfg.w_g, cfg.w_l);
  if (cfg.dump_dir) dump_pyramid(pyramid, *cfg.dump_dir);

  RunArtifacts run;
  const int width = input.width();
  const int height = input.height();
  const auto& coarsest = pyramid.levels.front().image;

  run.scene.background = mean_color(coarsest);
  auto initial = segment_components(coarsest, cfg.tau_seg, cfg.min_area, 0, 0);
  if (initial.empty()) {
    run.warnings.push_back("no components found at the coarsest level; scene is background only");
  }
  if (cfg.dump_dir) {
    save_image(label_map(initial, width, height), *cfg.dump_dir / "labels_t0.png");
  }
  append_components(std::move(initial), cfg.k_init, run.scene, run.paths);

  WeightMap weights(width, height);
  OptimConfig optim = cfg.optim;
  const int last = pyramid.depth() - 1;

  for (int t = 0; t <= last; ++t) {
    const RasterImage& target = pyramid.levels[static_cast<std::size_t>(t)].image;
    ScaleRecord rec;
    rec.level = t;
    rec.gamma = optim.gamma;
    rec.paths_before = static_cast<int>(run.scene.paths.size());

    if (t > 0) {
      const auto render = render_scene(run.scene, width, height, optim.raster());
      auto fresh = new_components_at_scale(target, render, cfg.tau_seg, cfg.min_area,
                                            cfg.tau_new, t, next_component_id(run.paths));
      rec.new_components = static_cast<int>(fresh.size());
      if (cfg.dump_dir) {
        save_image(label_map(fresh, width, height),
                   *cfg.dump_dir / ("labels_t" + std::to_string(t) + ".png"));
      }
      append_components(std::move(fresh), cfg.k_init, run.scene, run.paths);
    } else {
      rec.new_components = static_cast<int>(run.scene.paths.size());
    }

    // Accepted paths stop triggering refinement but keep being fitted.
    auto opt = optimize_scale(run.scene, target, weights, optim);
    rec.loss_before = opt.initial.total;
    rec.loss_after = opt.final_loss.total;
    rec.trace = std::move(opt.trace);
    run.scene = std::move(opt.scene);

    const auto render = render_scene(run.scene, width, height, optim.raster());

    // Acceptance check; refinement and re-initialization only where a later
    // level can still optimize the result.
    const std::size_t count = run.paths.size();
    for (std::size_t i = 0; i < count; ++i) {
      PathRecord& path = run.paths[i];
      if (path.frozen) continue;
      const double diff = component_diff(path.component, render, target);
      if (diff < cfg.diff_threshold) {
        path.frozen = true;
        path.diff_at_freeze = diff;
        path.frozen_at_scale = t;
        ++rec.accepted;
        continue;
      }
      if (t == last) continue;
      if (path.refinements < cfg.max_refinements_per_component) {
        run.scene.paths[i] = refine_path(run.scene.paths[i]);
        ++path.refinements;
        ++rec.refined;
      } else if (!path.reinitialized) {
        path.reinitialized = true;
        auto parts = new_components_at_scale(target, render, cfg.tau_seg, cfg.min_area,
                                             cfg.tau_new, t, next_component_id(run.paths),
                                             path.component.mask);
        rec.reinitialized += static_cast<int>(parts.size());
        append_components(std::move(parts), cfg.k_init, run.scene, run.paths);
      }
    }

    weights = update_weight_map(render, target);
    rec.paths_after = static_cast<int>(run.scene.paths.size());
    run.scales.push_back(std::move(rec));
    if (t < last) optim.gamma *= cfg.gamma_decay;
  }

  run.denoised = render_scene(run.scene, width, height, optim.raster());
  if (cfg.dump_dir) save_image(run.denoised, *cfg.dump_dir / "denoised.png");
  return run;
}

}  // namespace scalepaint
