#pragma once

#include "scalepaint/image.hpp"

namespace scalepaint {

inline constexpr double kPsnrCapDb = 99.0;

/// 10 log10(1 / MSE) with peak 1.0; kPsnrCapDb when MSE < 1e-10.
double psnr(const RasterImage& a, const RasterImage& b);

/// Mean SSIM over all full 11x11 windows (Gaussian sigma 1.5, K1 = 0.01,
/// K2 = 0.03, L = 1), averaged across channels. Requires both extents >= 11.
double ssim(const RasterImage& a, const RasterImage& b);

struct MetricsReport {
  double psnr_db = 0.0;
  double ssim = 0.0;
  double noisy_psnr_db = 0.0;
  double noisy_ssim = 0.0;
};

MetricsReport evaluate_metrics(const RasterImage& denoised, const RasterImage& noisy,
                               const RasterImage& clean);

}  // namespace scalepaint
