// Command-line front end: denoise, bench, phantom.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scalepaint/config.hpp"
#include "scalepaint/errors.hpp"
#include "scalepaint/image_io.hpp"
#include "scalepaint/metrics.hpp"
#include "scalepaint/noise.hpp"
#include "scalepaint/pipeline.hpp"
#include "scalepaint/report.hpp"
#include "scalepaint/svg.hpp"

namespace fs = std::filesystem;
using namespace scalepaint;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

PipelineConfig config_from(const std::optional<std::string>& path) {
  return path ? load_config(*path) : PipelineConfig{};
}

std::vector<double> parse_sigmas(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !(v >= 0.0)) {
      throw ConfigError("--sigmas: expected comma-separated non-negative numbers, got '" +
                        text + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("--sigmas: no noise levels given");
  return out;
}

struct DenoiseArgs {
  std::string input;
  std::optional<std::string> config;
  std::optional<std::string> out_image;
  std::optional<std::string> out_svg;
  std::optional<std::string> out_report;
  std::optional<std::string> out_trace;
  std::optional<std::string> reference;
};

int run_denoise(const DenoiseArgs& args) {
  const PipelineConfig cfg = config_from(args.config);
  const RasterImage input = load_image(args.input);
  std::optional<RasterImage> reference;
  if (args.reference) reference = load_image(*args.reference);

  const RunArtifacts run = denoise(input, cfg);
  for (const auto& w : run.warnings) std::cerr << "warning: " << w << '\n';

  std::optional<MetricsReport> metrics;
  if (reference) metrics = evaluate_metrics(run.denoised, input, *reference);

  if (args.out_image) save_image(run.denoised, *args.out_image);
  if (args.out_svg) {
    write_text(*args.out_svg, export_svg(run.scene, input.width(), input.height()));
  }
  if (args.out_report) {
    write_text(*args.out_report, run_report_json(run, cfg, metrics ? &*metrics : nullptr));
  }
  if (args.out_trace) {
    std::ostringstream csv;
    write_trace_csv(run, csv);
    write_text(*args.out_trace, csv.str());
  }
  std::cerr << "paths: " << run.scene.paths.size() << '\n';
  if (metrics) {
    std::cerr << "psnr: " << metrics->noisy_psnr_db << " -> " << metrics->psnr_db
              << " dB, ssim: " << metrics->noisy_ssim << " -> " << metrics->ssim << '\n';
  }
  return kExitOk;
}

struct BenchArgs {
  std::string clean;
  std::string sigmas = "5,10,20";
  std::uint64_t seed = 0;
  std::optional<std::string> config;
  std::optional<std::string> out_report;
  std::optional<std::string> out_dir;
  bool timings = false;
};

int run_bench(const BenchArgs& args) {
  const PipelineConfig cfg = config_from(args.config);
  const auto sigmas = parse_sigmas(args.sigmas);
  const RasterImage clean = load_image(args.clean);

  const BenchmarkResult result = run_benchmark(clean, sigmas, cfg, args.seed);
  const std::string report = benchmark_report_json(result, {args.timings, true});

  if (args.out_dir) {
    const fs::path dir = *args.out_dir;
    fs::create_directories(dir);
    for (const auto& e : result.entries) {
      const std::string key = sigma_key(e.sigma);
      save_image(e.noisy, dir / ("noisy_s" + key + ".png"));
      save_image(e.run.denoised, dir / ("denoised_s" + key + ".png"));
      write_text(dir / ("scene_s" + key + ".svg"),
                 export_svg(e.run.scene, clean.width(), clean.height()));
    }
    if (!args.out_report) write_text(dir / "report.json", report);
  }
  if (args.out_report) {
    write_text(*args.out_report, report);
  } else if (!args.out_dir) {
    std::cout << report;
  }
  for (const auto& e : result.entries) {
    std::cerr << "sigma " << sigma_key(e.sigma) << ": psnr " << e.metrics.noisy_psnr_db
              << " -> " << e.metrics.psnr_db << " dB, ssim " << e.metrics.noisy_ssim << " -> "
              << e.metrics.ssim << ", paths " << e.run.scene.paths.size() << ", "
              << static_cast<long long>(e.runtime_ms) << " ms\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vector-scene image denoiser"};
  app.require_subcommand(1);

  DenoiseArgs dn;
  auto* denoise_cmd = app.add_subcommand("denoise", "Denoise one image");
  denoise_cmd->add_option("input", dn.input, "Noisy input image (PNG/PGM/PPM)")->required();
  denoise_cmd->add_option("--config", dn.config, "Config file (key = value)");
  denoise_cmd->add_option("--out-image", dn.out_image, "Denoised raster output");
  denoise_cmd->add_option("--out-svg", dn.out_svg, "Vector scene as SVG");
  denoise_cmd->add_option("--out-report", dn.out_report, "JSON run report");
  denoise_cmd->add_option("--out-trace", dn.out_trace, "Loss trace CSV");
  denoise_cmd->add_option("--reference", dn.reference, "Clean image for PSNR/SSIM");

  BenchArgs bn;
  auto* bench_cmd = app.add_subcommand("bench", "Noise sweep against a clean image");
  bench_cmd->add_option("clean", bn.clean, "Clean reference image")->required();
  bench_cmd->add_option("--sigmas", bn.sigmas, "Comma-separated noise std-devs on 0..255")
      ->capture_default_str();
  bench_cmd->add_option("--seed", bn.seed, "Noise seed")->capture_default_str();
  bench_cmd->add_option("--config", bn.config, "Config file (key = value)");
  bench_cmd->add_option("--out-report", bn.out_report, "JSON report (stdout if omitted)");
  bench_cmd->add_option("--out-dir", bn.out_dir, "Directory for images, SVGs and report.json");
  bench_cmd->add_flag("--timings", bn.timings, "Record wall-clock runtime_ms in the report");

  int phantom_size = 128;
  std::string phantom_out;
  double phantom_sigma = 0.0;
  std::uint64_t phantom_seed = 0;
  auto* phantom_cmd = app.add_subcommand("phantom", "Write the nested-rectangle test image");
  phantom_cmd->add_option("--size", phantom_size, "Edge length in pixels")->capture_default_str();
  phantom_cmd->add_option("--out", phantom_out, "Output image")->required();
  phantom_cmd->add_option("--noise", phantom_sigma, "Optional noise std-dev on 0..255");
  phantom_cmd->add_option("--seed", phantom_seed, "Noise seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*denoise_cmd) return run_denoise(dn);
    if (*bench_cmd) return run_bench(bn);
    if (*phantom_cmd) {
      RasterImage img = make_phantom(phantom_size);
      if (phantom_sigma > 0.0) img = add_noise(img, phantom_sigma, phantom_seed);
      save_image(img, phantom_out);
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
