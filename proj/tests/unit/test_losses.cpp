#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "scalepaint/errors.hpp"
#include "scalepaint/losses.hpp"
#include "scalepaint/segmentation.hpp"

using namespace scalepaint;

TEST_CASE("weighted_mse") {
  const auto a = testing::random_image(6, 5, 1);
  const WeightMap ones(6, 5);
  CHECK(weighted_mse(a, a, ones) == 0.0);

  RasterImage b = a;
  for (double& v : b.data()) v += 0.1;
  CHECK(weighted_mse(a, b, ones) == doctest::Approx(0.01).epsilon(1e-12));

  SUBCASE("2x2 hand-weighted instance") {
    RasterImage x(2, 2, {0.0, 0.0, 0.0});
    RasterImage y(2, 2, {0.0, 0.0, 0.0});
    // Residual 0.2 on the left column only.
    y.set_pixel(0, 0, {0.2, 0.2, 0.2});
    y.set_pixel(0, 1, {0.2, 0.2, 0.2});
    const double uniform = weighted_mse(x, y, WeightMap(2, 2));
    CHECK(uniform == doctest::Approx(0.04 * 2 / 4).epsilon(1e-12));
    const WeightMap left_doubled(2, 2, {2.0, 0.1, 2.0, 0.1});
    CHECK(weighted_mse(x, y, left_doubled) == doctest::Approx(2.0 * uniform).epsilon(1e-12));
  }

  CHECK_THROWS_AS(weighted_mse(a, RasterImage(5, 5), ones), InvalidInput);
  CHECK_THROWS_AS(weighted_mse(a, a, WeightMap(5, 5)), InvalidInput);
  CHECK_THROWS_AS(WeightMap(2, 2, {1.0, 1.0, -1.0, 1.0}), InvalidInput);
  CHECK_THROWS_AS(WeightMap(2, 2, {1.0, 1.0}), InvalidInput);
}

TEST_CASE("xing_segment") {
  SUBCASE("crossed control polygon is penalized") {
    // e1 = (1,1), e2 = (0,-1), e3 = (-1,1): e1 x e2 = -1 so D1 = 0,
    // D2 = (1*1 - 1*(-1)) / 2 = 1, penalty = max(0, D2) = 1.
    const CubicSegment s{{0, 0}, {1, 1}, {1, 0}, {0, 1}};
    CHECK(xing_segment(s) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("convex counter-clockwise polygon is free") {
    const CubicSegment s{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(xing_segment(s) == 0.0);
  }
  SUBCASE("collinear control points are free") {
    CHECK(xing_segment({{0, 0}, {1, 0}, {2, 0}, {3, 0}}) == 0.0);
    CHECK(xing_segment({{0, 0}, {1, 1}, {2, 2}, {3, 3}}) == 0.0);
  }
  SUBCASE("zero-length edges use the zero convention") {
    CHECK(xing_segment({{1, 1}, {1, 1}, {2, 0}, {0, 5}}) == 0.0);
    CHECK(xing_segment({{1, 1}, {1, 1}, {1, 1}, {1, 1}}) == 0.0);
  }
  SUBCASE("non-negative on random polygons") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int i = 0; i < 1000; ++i) {
      const CubicSegment s{{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}};
      const double v = xing_segment(s);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("xing_loss is zero on ellipse initializations") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const auto p = make_ellipse_path({50 * u(rng), 50 * u(rng)}, 1 + 20 * u(rng), 1 + 20 * u(rng),
                                     6.3 * u(rng), 2 + i % 7, {});
    CHECK(xing_loss(p) == 0.0);
  }
  // Paths built from segmented masks.
  const auto img = testing::random_image(8, 8, 4);
  RasterImage blocky(32, 32);
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 32; ++x) blocky.set_pixel(x, y, img.pixel(x / 4, y / 4));
  for (const auto& c : segment_components(blocky, 0.05, 1)) {
    CHECK(xing_loss(init_path_for_component(c, 4)) == 0.0);
  }
}

TEST_CASE("xing_loss_gradient matches finite differences") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Vec2> pts(9);
    for (auto& p : pts) p = {u(rng), u(rng)};
    ClosedBezierPath path(pts, {});
    std::vector<Vec2> grad(pts.size());
    const double loss = xing_loss_gradient(path, 1.0, grad);
    CHECK(loss == doctest::Approx(xing_loss(path)).epsilon(1e-14));
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (int axis = 0; axis < 2; ++axis) {
        const double h = 1e-6;
        ClosedBezierPath lo = path, hi = path;
        (axis ? lo.points()[i].y : lo.points()[i].x) -= h;
        (axis ? hi.points()[i].y : hi.points()[i].x) += h;
        const double fd = (xing_loss(hi) - xing_loss(lo)) / (2 * h);
        const double an = axis ? grad[i].y : grad[i].x;
        // Skip points sitting on a sign switch of D1 or D2.
        ClosedBezierPath lo2 = path, hi2 = path;
        (axis ? lo2.points()[i].y : lo2.points()[i].x) -= 2 * h;
        (axis ? hi2.points()[i].y : hi2.points()[i].x) += 2 * h;
        const double fd2 = (xing_loss(hi2) - xing_loss(lo2)) / (4 * h);
        if (std::abs(fd - fd2) > 1e-4 * (1 + std::abs(fd))) continue;
        ++checked;
        CHECK(an == doctest::Approx(fd).epsilon(1e-4).scale(1.0));
      }
    }
  }
  CHECK(checked > 500);
}

TEST_CASE("update_weight_map") {
  SUBCASE("perfect render gives a uniform map") {
    const auto a = testing::random_image(10, 10, 9);
    const auto w = update_weight_map(a, a);
    for (double v : w.values()) CHECK(v == 1.0);
  }
  SUBCASE("residual in one quadrant dominates") {
    const auto target = testing::random_image(16, 16, 5);
    RasterImage render = target;
    std::mt19937_64 rng(6);
    std::normal_distribution<double> n(0.0, 0.01);
    for (double& v : render.data()) v += n(rng);
    for (int y = 0; y < 8; ++y)
      for (int x = 8; x < 16; ++x)
        for (int c = 0; c < 3; ++c) render.at(x, y, c) += 0.3;
    const auto w = update_weight_map(render, target);
    auto quad = [&](int qx, int qy) {
      double s = 0.0;
      for (int y = 8 * qy; y < 8 * qy + 8; ++y)
        for (int x = 8 * qx; x < 8 * qx + 8; ++x) s += w.at(x, y);
      return s / 64.0;
    };
    CHECK(quad(1, 0) > quad(0, 0));
    CHECK(quad(1, 0) > quad(0, 1));
    CHECK(quad(1, 0) > quad(1, 1));
  }
  SUBCASE("mean is one and the floor holds for any input") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const auto a = testing::random_image(13, 9, seed);
      auto b = testing::random_image(13, 9, seed + 1000);
      if (seed % 3 == 0) {
        // Sparse residual: most pixels exact, a few far off.
        b = a;
        for (int i = 0; i < 3; ++i) b.at(static_cast<int>(seed + i) % 13, i, 0) += 0.9;
      }
      const auto w = update_weight_map(a, b);
      CHECK(w.mean() == doctest::Approx(1.0).epsilon(1e-9));
      for (double v : w.values()) CHECK(v >= WeightMap::kFloor);
    }
  }
  CHECK_THROWS_AS(update_weight_map(RasterImage(3, 3), RasterImage(3, 4)), InvalidInput);
}
