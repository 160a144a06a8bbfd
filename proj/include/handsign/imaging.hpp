#pragma once

#include <array>
#include <cstdint>
#include <span>

#include <Eigen/Core>

namespace handsign {

/// Row-major pixel raster: rows are image lines (y), columns are x.
template <typename Scalar>
using Raster = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// 8-bit grayscale image. Width and height are at least 1.
class GrayImage {
 public:
  GrayImage(int width, int height, std::uint8_t fill = 0);
  explicit GrayImage(Raster<std::uint8_t> pixels);
  /// Copies `data` (row-major, width*height bytes).
  GrayImage(int width, int height, std::span<const std::uint8_t> data);

  int width() const noexcept { return static_cast<int>(pixels_.cols()); }
  int height() const noexcept { return static_cast<int>(pixels_.rows()); }
  std::size_t size() const noexcept { return static_cast<std::size_t>(pixels_.size()); }

  std::uint8_t operator()(int x, int y) const { return pixels_(y, x); }
  std::uint8_t& operator()(int x, int y) { return pixels_(y, x); }

  const Raster<std::uint8_t>& pixels() const noexcept { return pixels_; }
  Raster<std::uint8_t>& pixels() noexcept { return pixels_; }
  std::span<const std::uint8_t> data() const noexcept { return {pixels_.data(), size()}; }

  friend bool operator==(const GrayImage& a, const GrayImage& b) {
    return a.width() == b.width() && a.height() == b.height() && (a.pixels_ == b.pixels_).all();
  }

 private:
  Raster<std::uint8_t> pixels_;
};

/// Image whose pixels are exactly 0 or 1.
class BinaryImage {
 public:
  BinaryImage(int width, int height);
  /// Throws InvalidArgument if any value is outside {0, 1}.
  explicit BinaryImage(Raster<std::uint8_t> bits);

  int width() const noexcept { return static_cast<int>(bits_.cols()); }
  int height() const noexcept { return static_cast<int>(bits_.rows()); }
  std::size_t size() const noexcept { return static_cast<std::size_t>(bits_.size()); }

  bool operator()(int x, int y) const { return bits_(y, x) != 0; }
  void set(int x, int y, bool on) { bits_(y, x) = on ? 1 : 0; }
  void flip(int x, int y) { bits_(y, x) ^= 1; }

  const Raster<std::uint8_t>& bits() const noexcept { return bits_; }
  std::span<const std::uint8_t> data() const noexcept { return {bits_.data(), size()}; }
  std::size_t count() const noexcept;

  friend bool operator==(const BinaryImage& a, const BinaryImage& b) {
    return a.width() == b.width() && a.height() == b.height() && (a.bits_ == b.bits_).all();
  }

 private:
  Raster<std::uint8_t> bits_;
};

/// Sobel response. magnitude = sqrt(gx^2 + gy^2) elementwise.
struct GradientImage {
  Raster<double> gx;
  Raster<double> gy;
  Raster<double> magnitude;

  int width() const noexcept { return static_cast<int>(magnitude.cols()); }
  int height() const noexcept { return static_cast<int>(magnitude.rows()); }
};

using Histogram = std::array<std::uint64_t, 256>;

/// Interleaved 8-bit RGB to luma, round(0.299R + 0.587G + 0.114B).
GrayImage to_grayscale(std::span<const std::uint8_t> rgb, int width, int height);

/// Nearest-neighbor resampling to exactly out_w x out_h.
GrayImage resize(const GrayImage& img, int out_w, int out_h);

Histogram histogram(const GrayImage& img);

/// Threshold t maximizing the between-class variance of {<= t} vs {> t}.
/// Ties go to the smallest t; a single-valued histogram returns that value.
std::uint8_t otsu_threshold(const Histogram& hist);
std::uint8_t otsu_threshold(const GrayImage& img);

/// out = 1 iff pixel > t.
BinaryImage binarize(const GrayImage& img, std::uint8_t t);

/// Binarize with the image's own Otsu threshold.
BinaryImage binarize_otsu(const GrayImage& img);

/// Row-major 0.0 / 1.0 feature vector of length width*height.
Eigen::VectorXd flatten(const BinaryImage& img);

/// Maps bits to 0 / 255 intensities.
GrayImage to_gray(const BinaryImage& img);

/// 3x3 Sobel with replicate-edge borders. Requires width, height >= 3.
GradientImage sobel(const GrayImage& img);

/// out = 1 iff magnitude > t. t must be a finite value >= 0.
BinaryImage edge_map(const GradientImage& grad, double t);

/// Otsu applied to the gradient magnitude after quantizing it to 256 levels
/// of [0, max magnitude]. Returned in magnitude units, ready for edge_map.
double magnitude_threshold(const GradientImage& grad);

}  // namespace handsign
