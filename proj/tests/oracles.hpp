#pragma once

// Independent reference implementations used only by tests. They follow the
// textbook definitions directly and share no code with the library paths
// they check.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include <Eigen/Dense>

#include "handsign/imaging.hpp"

namespace oracle {

using handsign::BinaryImage;
using handsign::GrayImage;

inline GrayImage random_image(std::mt19937_64& rng, int w, int h) {
  std::uniform_int_distribution<int> px(0, 255);
  GrayImage img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) img(x, y) = static_cast<std::uint8_t>(px(rng));
  return img;
}

inline BinaryImage random_bits(std::mt19937_64& rng, int w, int h, double p = 0.5) {
  std::bernoulli_distribution on(p);
  BinaryImage img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) img.set(x, y, on(rng));
  return img;
}

/// 3x3 Sobel by explicit double loop, clamped (replicate) sampling.
struct NaiveGradient {
  std::vector<double> gx, gy;
};

inline NaiveGradient naive_sobel(const GrayImage& img) {
  static const int kx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
  static const int ky[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
  const int w = img.width();
  const int h = img.height();
  NaiveGradient g{std::vector<double>(w * h), std::vector<double>(w * h)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double sx = 0;
      double sy = 0;
      for (int j = -1; j <= 1; ++j) {
        for (int i = -1; i <= 1; ++i) {
          const int xx = std::clamp(x + i, 0, w - 1);
          const int yy = std::clamp(y + j, 0, h - 1);
          sx += kx[j + 1][i + 1] * img(xx, yy);
          sy += ky[j + 1][i + 1] * img(xx, yy);
        }
      }
      g.gx[y * w + x] = sx;
      g.gy[y * w + x] = sy;
    }
  }
  return g;
}

/// Exhaustive Otsu: for every t, split the pixels directly (no histogram
/// accumulation) and evaluate w0 * w1 * (mu0 - mu1)^2.
inline int exhaustive_otsu(const GrayImage& img) {
  double best = -1;
  int best_t = -1;
  for (int t = 0; t < 256; ++t) {
    std::uint64_t n0 = 0, n1 = 0, s0 = 0, s1 = 0;
    for (auto v : img.data()) {
      if (v <= t) {
        ++n0;
        s0 += v;
      } else {
        ++n1;
        s1 += v;
      }
    }
    if (n0 == 0 || n1 == 0) continue;
    const double total = double(n0 + n1);
    const double w0 = n0 / total;
    const double w1 = n1 / total;
    const double mu0 = double(s0) / n0;
    const double mu1 = double(s1) / n1;
    const double var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
    if (var > best) {
      best = var;
      best_t = t;
    }
  }
  if (best_t < 0) return img.data()[0];
  return best_t;
}

/// Per-pixel motion parameter.
inline std::size_t brute_motion(const BinaryImage& a, const BinaryImage& b, const BinaryImage& c) {
  std::size_t count = 0;
  for (int y = 0; y < a.height(); ++y)
    for (int x = 0; x < a.width(); ++x) {
      const bool ab = a(x, y) != b(x, y);
      const bool ac = a(x, y) != c(x, y);
      if (ab || ac) ++count;
    }
  return count;
}

/// Rotates 90 degrees clockwise: out(x', y') with x' = h-1-y, y' = x.
template <typename Img>
Img rotate90(const Img& img) {
  Img out(img.height(), img.width());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) out(img.height() - 1 - y, x) = img(x, y);
  return out;
}

inline Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = g(rng);
  return (a + a.transpose()) / 2.0;
}

/// Unique scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("handsign_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + "_" +
             std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace oracle
