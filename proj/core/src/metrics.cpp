#include "scalepaint/metrics.hpp"

#include <array>
#include <cmath>

#include "scalepaint/errors.hpp"

namespace scalepaint {

namespace {

constexpr int kWindow = 11;
constexpr int kRadius = kWindow / 2;
constexpr double kWindowSigma = 1.5;
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;

std::array<double, kWindow> gaussian_window() {
  std::array<double, kWindow> w{};
  double sum = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double d = i - kRadius;
    w[i] = std::exp(-d * d / (2.0 * kWindowSigma * kWindowSigma));
    sum += w[i];
  }
  for (double& v : w) v /= sum;
  return w;
}

// Gaussian-weighted first and second moments of one window.
struct Moments {
  double mu_a = 0.0, mu_b = 0.0, aa = 0.0, bb = 0.0, ab = 0.0;
};

}  // namespace

double psnr(const RasterImage& a, const RasterImage& b) {
  if (!a.same_shape(b) || a.empty()) throw InvalidInput("psnr: dimension mismatch");
  const auto da = a.data();
  const auto db = b.data();
  double sum = 0.0;
  for (std::size_t i = 0; i < da.size(); ++i) {
    const double r = da[i] - db[i];
    sum += r * r;
  }
  const double mse = sum / static_cast<double>(da.size());
  if (mse < 1e-10) return kPsnrCapDb;
  return std::min(kPsnrCapDb, 10.0 * std::log10(1.0 / mse));
}

double ssim(const RasterImage& a, const RasterImage& b) {
  if (!a.same_shape(b)) throw InvalidInput("ssim: dimension mismatch");
  if (a.width() < kWindow || a.height() < kWindow) {
    throw InvalidInput("ssim: image smaller than the 11x11 window");
  }
  if (a == b) return 1.0;

  const auto win = gaussian_window();
  const int w = a.width();
  const int h = a.height();
  const int ow = w - kWindow + 1;
  const int oh = h - kWindow + 1;

  double total = 0.0;
  std::vector<Moments> rows(static_cast<std::size_t>(ow) * h);
  for (int c = 0; c < 3; ++c) {
    // Horizontal pass.
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < ow; ++x) {
        Moments m;
        for (int i = 0; i < kWindow; ++i) {
          const double va = a.at(x + i, y, c);
          const double vb = b.at(x + i, y, c);
          m.mu_a += win[i] * va;
          m.mu_b += win[i] * vb;
          m.aa += win[i] * va * va;
          m.bb += win[i] * vb * vb;
          m.ab += win[i] * va * vb;
        }
        rows[static_cast<std::size_t>(y) * ow + x] = m;
      }
    }
    // Vertical pass and per-window SSIM.
    double channel = 0.0;
    for (int y = 0; y < oh; ++y) {
      for (int x = 0; x < ow; ++x) {
        Moments m;
        for (int j = 0; j < kWindow; ++j) {
          const Moments& r = rows[static_cast<std::size_t>(y + j) * ow + x];
          m.mu_a += win[j] * r.mu_a;
          m.mu_b += win[j] * r.mu_b;
          m.aa += win[j] * r.aa;
          m.bb += win[j] * r.bb;
          m.ab += win[j] * r.ab;
        }
        const double var_a = m.aa - m.mu_a * m.mu_a;
        const double var_b = m.bb - m.mu_b * m.mu_b;
        const double cov = m.ab - m.mu_a * m.mu_b;
        const double num = (2.0 * m.mu_a * m.mu_b + kC1) * (2.0 * cov + kC2);
        const double den = (m.mu_a * m.mu_a + m.mu_b * m.mu_b + kC1) * (var_a + var_b + kC2);
        channel += num / den;
      }
    }
    total += channel / (static_cast<double>(ow) * oh);
  }
  return total / 3.0;
}

MetricsReport evaluate_metrics(const RasterImage& denoised, const RasterImage& noisy,
                               const RasterImage& clean) {
  return {psnr(denoised, clean), ssim(denoised, clean), psnr(noisy, clean),
          ssim(noisy, clean)};
}

}  // namespace scalepaint
