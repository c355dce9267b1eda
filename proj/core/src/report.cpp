#include "scalepaint/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "scalepaint/errors.hpp"
#include "scalepaint/noise.hpp"

namespace scalepaint {

namespace {

using nlohmann::ordered_json;

ordered_json config_json(const PipelineConfig& cfg) {
  ordered_json j;
  auto schedule = ordered_json::array();
  for (const auto& s : cfg.schedule) schedule.push_back({s.mu, s.sigma});
  j["schedule"] = schedule;
  j["w_g"] = cfg.w_g;
  j["w_l"] = cfg.w_l;
  j["tau_seg"] = cfg.tau_seg;
  j["min_area"] = cfg.min_area;
  j["tau_new"] = cfg.tau_new;
  j["diff_threshold"] = cfg.diff_threshold;
  j["k_init"] = cfg.k_init;
  j["max_refinements_per_component"] = cfg.max_refinements_per_component;
  j["gamma_decay"] = cfg.gamma_decay;
  j["alpha"] = cfg.optim.alpha;
  j["beta"] = cfg.optim.beta;
  j["lambda"] = cfg.optim.lambda;
  j["t_max"] = cfg.optim.t_max;
  j["gamma"] = cfg.optim.gamma;
  j["samples_per_segment"] = cfg.optim.samples_per_segment;
  j["adam_beta1"] = cfg.optim.adam_beta1;
  j["adam_beta2"] = cfg.optim.adam_beta2;
  j["adam_epsilon"] = cfg.optim.adam_epsilon;
  j["seed"] = cfg.optim.seed;
  j["dump_dir"] = cfg.dump_dir ? ordered_json(cfg.dump_dir->string()) : ordered_json(nullptr);
  return j;
}

ordered_json traces_json(const RunArtifacts& run) {
  auto scales = ordered_json::array();
  for (const auto& s : run.scales) {
    ordered_json j;
    j["level"] = s.level;
    j["gamma"] = s.gamma;
    j["loss_before"] = s.loss_before;
    j["loss_after"] = s.loss_after;
    auto mse = ordered_json::array();
    auto xing = ordered_json::array();
    auto total = ordered_json::array();
    for (const auto& t : s.trace) {
      mse.push_back(t.mse);
      xing.push_back(t.xing);
      total.push_back(t.total);
    }
    j["mse"] = std::move(mse);
    j["xing"] = std::move(xing);
    j["total"] = std::move(total);
    scales.push_back(std::move(j));
  }
  return scales;
}

ordered_json scales_json(const RunArtifacts& run) {
  auto arr = ordered_json::array();
  for (const auto& s : run.scales) {
    ordered_json j;
    j["level"] = s.level;
    j["gamma"] = s.gamma;
    j["new_components"] = s.new_components;
    j["paths_before"] = s.paths_before;
    j["paths_after"] = s.paths_after;
    j["accepted"] = s.accepted;
    j["refined"] = s.refined;
    j["reinitialized"] = s.reinitialized;
    j["loss_before"] = s.loss_before;
    j["loss_after"] = s.loss_after;
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace

std::string sigma_key(double sigma) {
  char buf[32];
  if (sigma == std::floor(sigma) && std::abs(sigma) < 1e15) {
    std::snprintf(buf, sizeof buf, "%.0f", sigma);
  } else {
    std::snprintf(buf, sizeof buf, "%g", sigma);
  }
  return buf;
}

BenchmarkResult run_benchmark(const RasterImage& clean, const std::vector<double>& sigmas,
                              const PipelineConfig& cfg, std::uint64_t seed) {
  if (sigmas.empty()) throw InvalidInput("run_benchmark: no noise levels given");
  cfg.validate();
  BenchmarkResult result;
  result.config = cfg;
  result.config.optim.seed = seed;
  result.seed = seed;
  for (double sigma : sigmas) {
    BenchmarkEntry entry;
    entry.sigma = sigma;
    const auto start = std::chrono::steady_clock::now();
    entry.noisy = add_noise(clean, sigma, seed);
    entry.run = denoise(entry.noisy, result.config);
    entry.metrics = evaluate_metrics(entry.run.denoised, entry.noisy, clean);
    entry.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    result.entries.push_back(std::move(entry));
  }
  return result;
}

std::string benchmark_report_json(const BenchmarkResult& result, const ReportOptions& opts) {
  ordered_json j;
  j["config"] = config_json(result.config);
  j["seed"] = result.seed;
  ordered_json results = ordered_json::object();
  ordered_json traces = ordered_json::object();
  for (const auto& e : result.entries) {
    ordered_json r;
    r["sigma"] = e.sigma;
    r["noisy_psnr"] = e.metrics.noisy_psnr_db;
    r["noisy_ssim"] = e.metrics.noisy_ssim;
    r["denoised_psnr"] = e.metrics.psnr_db;
    r["denoised_ssim"] = e.metrics.ssim;
    r["paths"] = e.run.scene.paths.size();
    r["runtime_ms"] = opts.include_timings ? ordered_json(e.runtime_ms) : ordered_json(nullptr);
    r["component_counts"] = e.run.component_counts();
    r["scales"] = scales_json(e.run);
    r["warnings"] = e.run.warnings;
    results[sigma_key(e.sigma)] = std::move(r);
    if (opts.include_traces) traces[sigma_key(e.sigma)] = traces_json(e.run);
  }
  j["results"] = std::move(results);
  j["loss_traces"] = std::move(traces);
  return j.dump(2) + "\n";
}

std::string run_report_json(const RunArtifacts& run, const PipelineConfig& cfg,
                            const MetricsReport* metrics) {
  ordered_json j;
  j["config"] = config_json(cfg);
  j["seed"] = cfg.optim.seed;
  j["paths"] = run.scene.paths.size();
  j["component_counts"] = run.component_counts();
  j["scales"] = scales_json(run);
  j["warnings"] = run.warnings;
  if (metrics) {
    j["metrics"] = {{"noisy_psnr", metrics->noisy_psnr_db},
                    {"noisy_ssim", metrics->noisy_ssim},
                    {"denoised_psnr", metrics->psnr_db},
                    {"denoised_ssim", metrics->ssim}};
  }
  j["loss_traces"] = traces_json(run);
  return j.dump(2) + "\n";
}

void write_trace_csv(const RunArtifacts& run, std::ostream& out) {
  out << "iteration,mse,xing,total\n";
  char buf[128];
  std::size_t it = 0;
  for (const auto& s : run.scales) {
    for (const auto& t : s.trace) {
      std::snprintf(buf, sizeof buf, "%zu,%.10g,%.10g,%.10g\n", it++, t.mse, t.xing, t.total);
      out << buf;
    }
  }
}

}  // namespace scalepaint
