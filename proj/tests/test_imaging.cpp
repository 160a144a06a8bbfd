#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "handsign/error.hpp"
#include "handsign/imaging.hpp"
#include "oracles.hpp"

using namespace handsign;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected handsign::Error");
  return ErrorCode::InvalidArgument;
}

GrayImage vertical_step(int w, int h, int step_col) {
  GrayImage img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = step_col; x < w; ++x) img(x, y) = 255;
  return img;
}

}  // namespace

TEST_CASE("to_grayscale luma") {
  const std::vector<std::uint8_t> rgb = {255, 255, 255, 0, 0, 0, 255, 0, 0};
  const GrayImage g = to_grayscale(rgb, 3, 1);
  CHECK(g(0, 0) == 255);
  CHECK(g(1, 0) == 0);
  // round(0.299 * 255) = round(76.245)
  CHECK(g(2, 0) == 76);

  CHECK(code_of([&] { to_grayscale(rgb, 2, 2); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("GrayImage rejects inconsistent buffers") {
  const std::vector<std::uint8_t> four(4, 0);
  CHECK(code_of([&] { GrayImage(3, 2, four); }) == ErrorCode::DimensionMismatch);
  CHECK(code_of([] { GrayImage(0, 2); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("resize") {
  std::mt19937_64 rng(1);
  SUBCASE("identity at own size") {
    for (int i = 0; i < 20; ++i) {
      const GrayImage img = oracle::random_image(rng, 1 + i % 7, 1 + i % 5);
      CHECK(resize(img, img.width(), img.height()) == img);
    }
  }
  SUBCASE("2x2 upscaled to 4x4 replicates 2x2 blocks") {
    const std::vector<std::uint8_t> src = {10, 20, 30, 40};
    const GrayImage img(2, 2, src);
    const GrayImage up = resize(img, 4, 4);
    for (int y = 0; y < 4; ++y)
      for (int x = 0; x < 4; ++x) CHECK(up(x, y) == img(x / 2, y / 2));
  }
  SUBCASE("profile targets") {
    const GrayImage img = oracle::random_image(rng, 64, 48);
    const GrayImage webcam = resize(img, 60, 80);
    CHECK(webcam.width() == 60);
    CHECK(webcam.height() == 80);
    const GrayImage android = resize(img, 100, 100);
    CHECK(android.width() == 100);
    CHECK(android.height() == 100);
  }
  SUBCASE("zero target") {
    const GrayImage img(3, 3);
    CHECK(code_of([&] { resize(img, 0, 4); }) == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("otsu_threshold") {
  SUBCASE("bimodal image separates the classes") {
    GrayImage img(8, 8);
    for (int y = 0; y < 8; ++y)
      for (int x = 4; x < 8; ++x) img(x, y) = 255;
    const int t = otsu_threshold(img);
    CHECK(t >= 0);
    CHECK(t < 255);
    CHECK(binarize(img, static_cast<std::uint8_t>(t)).count() == 32);
  }
  SUBCASE("constant image returns its value") {
    CHECK(otsu_threshold(GrayImage(5, 5, 7)) == 7);
    CHECK(otsu_threshold(GrayImage(5, 5, 0)) == 0);
    CHECK(otsu_threshold(GrayImage(5, 5, 255)) == 255);
  }
  SUBCASE("matches exhaustive search") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 300; ++i) {
      const GrayImage img = oracle::random_image(rng, 8, 8);
      CHECK(otsu_threshold(img) == oracle::exhaustive_otsu(img));
    }
    // Few distinct levels produce wide runs of empty bins and tied splits.
    std::uniform_int_distribution<int> level(0, 3);
    for (int i = 0; i < 300; ++i) {
      GrayImage img(6, 6);
      for (int y = 0; y < 6; ++y)
        for (int x = 0; x < 6; ++x) img(x, y) = static_cast<std::uint8_t>(level(rng) * 60);
      CHECK(otsu_threshold(img) == oracle::exhaustive_otsu(img));
    }
  }
}

TEST_CASE("binarize uses strict inequality") {
  CHECK(binarize(GrayImage(4, 4, 0), 128).count() == 0);
  CHECK(binarize(GrayImage(4, 4, 255), 128).count() == 16);
  CHECK(binarize(GrayImage(4, 4, 128), 128).count() == 0);
  CHECK(binarize(GrayImage(4, 4, 129), 128).count() == 16);
}

TEST_CASE("flatten") {
  CHECK(flatten(BinaryImage(60, 80)).size() == 4800);
  CHECK(flatten(BinaryImage(100, 100)).size() == 10000);
  CHECK(flatten(BinaryImage(7, 3)).isZero());

  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const GrayImage img = oracle::random_image(rng, 9, 6);
    const BinaryImage bits = binarize(img, static_cast<std::uint8_t>(i * 12));
    const Eigen::VectorXd v = flatten(bits);
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      CHECK((v(k) == 0.0 || v(k) == 1.0));
      // row-major
      CHECK(v(k) == (bits(static_cast<int>(k % 9), static_cast<int>(k / 9)) ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("BinaryImage rejects values other than 0/1") {
  Raster<std::uint8_t> raw = Raster<std::uint8_t>::Zero(2, 2);
  raw(1, 1) = 2;
  CHECK(code_of([&] { BinaryImage{raw}; }) == ErrorCode::InvalidArgument);
}

TEST_CASE("sobel") {
  SUBCASE("constant image has no gradient") {
    const GradientImage g = sobel(GrayImage(6, 5, 93));
    CHECK(g.gx.isZero());
    CHECK(g.gy.isZero());
    CHECK(g.magnitude.isZero());
  }
  SUBCASE("vertical step gives 255 * (1 + 2 + 1)") {
    const GradientImage g = sobel(vertical_step(8, 6, 4));
    for (int y = 1; y < 5; ++y) {
      for (int x : {3, 4}) {
        CHECK(g.magnitude(y, x) == 1020.0);
        CHECK(g.gy(y, x) == 0.0);
      }
      CHECK(g.magnitude(y, 2) == 0.0);
      CHECK(g.magnitude(y, 5) == 0.0);
    }
  }
  SUBCASE("equals naive convolution exactly") {
    std::mt19937_64 rng(4);
    const GrayImage img = oracle::random_image(rng, 16, 16);
    const GradientImage g = sobel(img);
    const auto ref = oracle::naive_sobel(img);
    for (int y = 0; y < 16; ++y)
      for (int x = 0; x < 16; ++x) {
        CHECK(g.gx(y, x) == ref.gx[y * 16 + x]);
        CHECK(g.gy(y, x) == ref.gy[y * 16 + x]);
      }
  }
  SUBCASE("magnitude invariant") {
    std::mt19937_64 rng(5);
    const GradientImage g = sobel(oracle::random_image(rng, 11, 7));
    CHECK(((g.gx.square() + g.gy.square()).sqrt() - g.magnitude).abs().maxCoeff() <= 1e-9);
  }
  SUBCASE("90 degree rotation commutes with magnitude") {
    std::mt19937_64 rng(6);
    for (int i = 0; i < 20; ++i) {
      const GrayImage img = oracle::random_image(rng, 5 + i % 6, 4 + i % 9);
      const GradientImage direct = sobel(img);
      const GradientImage rotated = sobel(oracle::rotate90(img));
      const int h = img.height();
      for (int y = 1; y + 1 < h; ++y)
        for (int x = 1; x + 1 < img.width(); ++x) {
          // (x, y) maps to (h - 1 - y, x)
          CHECK(std::abs(rotated.magnitude(x, h - 1 - y) - direct.magnitude(y, x)) <= 1e-9);
        }
    }
  }
  SUBCASE("too small") {
    CHECK(code_of([] { sobel(GrayImage(2, 5)); }) == ErrorCode::ImageTooSmall);
    CHECK(code_of([] { sobel(GrayImage(5, 2)); }) == ErrorCode::ImageTooSmall);
  }
}

TEST_CASE("edge_map") {
  CHECK(edge_map(sobel(GrayImage(5, 5, 40)), 0.0).count() == 0);

  const GradientImage step = sobel(vertical_step(8, 6, 4));
  const BinaryImage at_zero = edge_map(step, 0.0);
  CHECK(at_zero.count() == static_cast<std::size_t>((step.magnitude > 0.0).count()));

  const BinaryImage edges = edge_map(step, 500.0);
  for (int y = 0; y < 6; ++y)
    for (int x = 0; x < 8; ++x) CHECK(edges(x, y) == (x == 3 || x == 4));

  CHECK(code_of([&] { edge_map(step, -1.0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { edge_map(step, std::numeric_limits<double>::quiet_NaN()); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("magnitude_threshold separates a clean step") {
  const GradientImage step = sobel(vertical_step(10, 6, 5));
  const double t = magnitude_threshold(step);
  CHECK(t > 0.0);
  CHECK(t < 1020.0);
  CHECK(edge_map(step, t).count() == 12);
  CHECK(magnitude_threshold(sobel(GrayImage(4, 4, 9))) == 0.0);
}
