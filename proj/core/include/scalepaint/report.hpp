#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "scalepaint/config.hpp"
#include "scalepaint/image.hpp"
#include "scalepaint/metrics.hpp"
#include "scalepaint/pipeline.hpp"

namespace scalepaint {

/// One row of the noise sweep.
struct BenchmarkEntry {
  double sigma = 0.0;
  RasterImage noisy;
  RunArtifacts run;
  MetricsReport metrics;
  double runtime_ms = 0.0;
};

struct BenchmarkResult {
  PipelineConfig config;
  std::uint64_t seed = 0;
  std::vector<BenchmarkEntry> entries;
};

/// For each sigma: add seeded noise to the clean image, denoise, and score
/// both noisy and denoised images against the clean one. Every sigma uses
/// the same seed. Throws InvalidInput when sigmas is empty.
BenchmarkResult run_benchmark(const RasterImage& clean, const std::vector<double>& sigmas,
                              const PipelineConfig& cfg, std::uint64_t seed);

struct ReportOptions {
  bool include_timings = false;  // wall-clock values make reports non-reproducible
  bool include_traces = true;
};

/// JSON report with keys config, seed, results (keyed by sigma) and
/// loss_traces. runtime_ms is null unless timings are requested.
std::string benchmark_report_json(const BenchmarkResult& result, const ReportOptions& opts = {});

/// JSON report for a single denoise run; metrics are included when given.
std::string run_report_json(const RunArtifacts& run, const PipelineConfig& cfg,
                            const MetricsReport* metrics = nullptr);

/// Loss trace as CSV with header `iteration,mse,xing,total`; iterations
/// count across all scales.
void write_trace_csv(const RunArtifacts& run, std::ostream& out);

/// Key used for a sigma in `results`: integral values print without a
/// fractional part.
std::string sigma_key(double sigma);

}  // namespace scalepaint
