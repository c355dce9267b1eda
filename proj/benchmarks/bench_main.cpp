#include <benchmark/benchmark.h>

#include "oracles.hpp"
#include "scalepaint/image.hpp"
#include "scalepaint/metrics.hpp"
#include "scalepaint/scale_space.hpp"
#include "scalepaint/segmentation.hpp"
#include "scalepaint/soft_raster.hpp"

using namespace scalepaint;

static void BM_Convolve(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  const auto img = testing::random_image(size, size, 1);
  const auto k = make_aniso_kernel(4.0, 4.0);
  for (auto _ : state) benchmark::DoNotOptimize(convolve2d(img, k));
  state.SetItemsProcessed(state.iterations() * size * size);
}
BENCHMARK(BM_Convolve)->Arg(64)->Arg(128);

static void BM_Render(benchmark::State& state) {
  const int paths = static_cast<int>(state.range(0));
  const auto scene = testing::random_scene(128, paths, 2);
  for (auto _ : state) benchmark::DoNotOptimize(render_scene(scene, 128, 128));
}
BENCHMARK(BM_Render)->Arg(1)->Arg(8)->Arg(32);

static void BM_Gradients(benchmark::State& state) {
  const int paths = static_cast<int>(state.range(0));
  const auto scene = testing::random_scene(128, paths, 3);
  const auto target = testing::random_image(128, 128, 4);
  const WeightMap w(128, 128);
  for (auto _ : state) benchmark::DoNotOptimize(scene_gradients(scene, target, w, 0.01));
}
BENCHMARK(BM_Gradients)->Arg(1)->Arg(8)->Arg(32);

static void BM_Segment(benchmark::State& state) {
  const auto img = testing::random_image(128, 128, 5);
  for (auto _ : state) benchmark::DoNotOptimize(segment_components(img, 0.2, 4));
}
BENCHMARK(BM_Segment);

static void BM_Ssim(benchmark::State& state) {
  const auto a = testing::random_image(128, 128, 6);
  const auto b = testing::random_image(128, 128, 7);
  for (auto _ : state) benchmark::DoNotOptimize(ssim(a, b));
}
BENCHMARK(BM_Ssim);

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
