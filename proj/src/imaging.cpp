#include "handsign/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "handsign/error.hpp"

namespace handsign {
namespace {

void require_dims(int width, int height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::DimensionMismatch,
                "image dimensions must be >= 1, got " + std::to_string(width) + "x" +
                    std::to_string(height));
  }
}

// Between-class variance of the split {<= t} / {> t}, scaled by total^2:
// (S0*W - S*w0)^2 / (w0 * w1). Both classes must be non-empty.
double between_class(std::uint64_t w0, std::uint64_t s0, std::uint64_t total, std::uint64_t sum) {
  const double d = static_cast<double>(s0) * static_cast<double>(total) -
                   static_cast<double>(sum) * static_cast<double>(w0);
  return d * d / (static_cast<double>(w0) * static_cast<double>(total - w0));
}

}  // namespace

GrayImage::GrayImage(int width, int height, std::uint8_t fill) {
  require_dims(width, height);
  pixels_ = Raster<std::uint8_t>::Constant(height, width, fill);
}

GrayImage::GrayImage(Raster<std::uint8_t> pixels) : pixels_(std::move(pixels)) {
  require_dims(width(), height());
}

GrayImage::GrayImage(int width, int height, std::span<const std::uint8_t> data) {
  require_dims(width, height);
  if (data.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorCode::DimensionMismatch, "pixel buffer length " + std::to_string(data.size()) +
                                                  " does not match " + std::to_string(width) + "x" +
                                                  std::to_string(height));
  }
  pixels_ = Eigen::Map<const Raster<std::uint8_t>>(data.data(), height, width);
}

BinaryImage::BinaryImage(int width, int height) {
  require_dims(width, height);
  bits_ = Raster<std::uint8_t>::Zero(height, width);
}

BinaryImage::BinaryImage(Raster<std::uint8_t> bits) : bits_(std::move(bits)) {
  require_dims(width(), height());
  if ((bits_ > 1).any()) throw Error(ErrorCode::InvalidArgument, "binary image values must be 0 or 1");
}

std::size_t BinaryImage::count() const noexcept {
  return static_cast<std::size_t>(bits_.cast<std::size_t>().sum());
}

GrayImage to_grayscale(std::span<const std::uint8_t> rgb, int width, int height) {
  require_dims(width, height);
  const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (rgb.size() != 3 * n) {
    throw Error(ErrorCode::DimensionMismatch,
                "RGB buffer length " + std::to_string(rgb.size()) + ", expected " + std::to_string(3 * n));
  }
  GrayImage out(width, height);
  auto* dst = out.pixels().data();
  for (std::size_t i = 0; i < n; ++i) {
    const double luma = 0.299 * rgb[3 * i] + 0.587 * rgb[3 * i + 1] + 0.114 * rgb[3 * i + 2];
    dst[i] = static_cast<std::uint8_t>(std::clamp(std::lround(luma), 0L, 255L));
  }
  return out;
}

GrayImage resize(const GrayImage& img, int out_w, int out_h) {
  if (out_w < 1 || out_h < 1) {
    throw Error(ErrorCode::DimensionMismatch,
                "resize target must be >= 1, got " + std::to_string(out_w) + "x" + std::to_string(out_h));
  }
  GrayImage out(out_w, out_h);
  const long in_w = img.width();
  const long in_h = img.height();
  for (int y = 0; y < out_h; ++y) {
    const int sy = static_cast<int>(y * in_h / out_h);
    for (int x = 0; x < out_w; ++x) {
      out(x, y) = img(static_cast<int>(x * in_w / out_w), sy);
    }
  }
  return out;
}

Histogram histogram(const GrayImage& img) {
  Histogram hist{};
  for (auto v : img.data()) ++hist[v];
  return hist;
}

std::uint8_t otsu_threshold(const Histogram& hist) {
  std::uint64_t total = 0;
  std::uint64_t sum = 0;
  for (int v = 0; v < 256; ++v) {
    total += hist[v];
    sum += hist[v] * static_cast<std::uint64_t>(v);
  }

  std::uint64_t w0 = 0;
  std::uint64_t s0 = 0;
  double best = -1.0;
  int best_t = -1;
  for (int t = 0; t < 255; ++t) {
    w0 += hist[t];
    s0 += hist[t] * static_cast<std::uint64_t>(t);
    if (w0 == 0 || w0 == total) continue;
    const double var = between_class(w0, s0, total, sum);
    if (var > best) {
      best = var;
      best_t = t;
    }
  }
  if (best_t >= 0) return static_cast<std::uint8_t>(best_t);

  // Single occupied bin (or empty histogram).
  for (int v = 0; v < 256; ++v) {
    if (hist[v] != 0) return static_cast<std::uint8_t>(v);
  }
  return 0;
}

std::uint8_t otsu_threshold(const GrayImage& img) { return otsu_threshold(histogram(img)); }

BinaryImage binarize(const GrayImage& img, std::uint8_t t) {
  return BinaryImage((img.pixels() > t).cast<std::uint8_t>().eval());
}

BinaryImage binarize_otsu(const GrayImage& img) { return binarize(img, otsu_threshold(img)); }

Eigen::VectorXd flatten(const BinaryImage& img) {
  return Eigen::Map<const Eigen::Matrix<std::uint8_t, Eigen::Dynamic, 1>>(img.data().data(),
                                                                         static_cast<Eigen::Index>(img.size()))
      .cast<double>();
}

GrayImage to_gray(const BinaryImage& img) {
  return GrayImage((img.bits() * std::uint8_t{255}).eval());
}

GradientImage sobel(const GrayImage& img) {
  const int w = img.width();
  const int h = img.height();
  if (w < 3 || h < 3) {
    throw Error(ErrorCode::ImageTooSmall,
                "sobel needs at least 3x3, got " + std::to_string(w) + "x" + std::to_string(h));
  }

  // Replicate-edge padding.
  Raster<double> padded(h + 2, w + 2);
  for (int y = -1; y <= h; ++y) {
    const int sy = std::clamp(y, 0, h - 1);
    for (int x = -1; x <= w; ++x) {
      padded(y + 1, x + 1) = img(std::clamp(x, 0, w - 1), sy);
    }
  }

  // Row/column offsets into the padded raster (interior starts at 1).
  auto at = [&](int dy, int dx) { return padded.block(1 + dy, 1 + dx, h, w); };

  GradientImage g;
  g.gx = (at(-1, 1) - at(-1, -1)) + 2.0 * (at(0, 1) - at(0, -1)) + (at(1, 1) - at(1, -1));
  g.gy = (at(1, -1) - at(-1, -1)) + 2.0 * (at(1, 0) - at(-1, 0)) + (at(1, 1) - at(-1, 1));
  g.magnitude = (g.gx.square() + g.gy.square()).sqrt();
  return g;
}

BinaryImage edge_map(const GradientImage& grad, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::InvalidArgument, "edge threshold must be finite and >= 0");
  }
  return BinaryImage((grad.magnitude > t).cast<std::uint8_t>().eval());
}

double magnitude_threshold(const GradientImage& grad) {
  const double peak = grad.magnitude.maxCoeff();
  if (!(peak > 0.0)) return 0.0;
  const double scale = peak / 255.0;
  Histogram hist{};
  for (Eigen::Index i = 0; i < grad.magnitude.size(); ++i) {
    const auto level = std::clamp(std::lround(grad.magnitude.data()[i] / scale), 0L, 255L);
    ++hist[static_cast<std::size_t>(level)];
  }
  return (otsu_threshold(hist) + 0.5) * scale;
}

}  // namespace handsign
