#include "handsign/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "handsign/dataset.hpp"
#include "handsign/error.hpp"

namespace fs = std::filesystem;

namespace handsign::synthetic {
namespace {

struct Point {
  double u;
  double v;
};

bool in_box(double u, double v, double u0, double u1, double v0, double v1) {
  return u >= u0 && u <= u1 && v >= v0 && v <= v1;
}

// Even-odd rule.
bool in_polygon(double u, double v, const std::vector<Point>& poly) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const auto& a = poly[i];
    const auto& b = poly[j];
    if ((a.v > v) != (b.v > v) && u < (b.u - a.u) * (v - a.v) / (b.v - a.v) + a.u) inside = !inside;
  }
  return inside;
}

std::vector<Point> star_polygon() {
  std::vector<Point> pts;
  for (int i = 0; i < 10; ++i) {
    const double r = i % 2 == 0 ? 0.95 : 0.4;
    const double a = -std::numbers::pi / 2 + i * std::numbers::pi / 5;
    pts.push_back({r * std::cos(a), r * std::sin(a)});
  }
  return pts;
}

// Silhouette membership in normalized coordinates (unit = 0.42 * min(w, h)).
bool inside(int id, double u, double v) {
  static const std::vector<Point> star = star_polygon();
  static const std::vector<Point> triangle = {{0.0, -0.9}, {0.9, 0.9}, {-0.9, 0.9}};
  const double r = std::hypot(u, v);
  switch (id) {
    case 0:  // S: star
      return in_polygon(u, v, star);
    case 1:  // R: L-shape
      return in_box(u, v, -0.8, -0.2, -0.9, 0.9) || in_box(u, v, -0.8, 0.8, 0.4, 0.9);
    case 2:  // T
      return in_box(u, v, -0.9, 0.9, -0.9, -0.45) || in_box(u, v, -0.22, 0.22, -0.9, 0.9);
    case 3:  // H
      return in_box(u, v, -0.9, -0.45, -0.9, 0.9) || in_box(u, v, 0.45, 0.9, -0.9, 0.9) ||
             in_box(u, v, -0.9, 0.9, -0.2, 0.2);
    case 4:  // X
      return std::abs(u) <= 0.9 && std::abs(v) <= 0.9 &&
             (std::abs(u - v) <= 0.35 || std::abs(u + v) <= 0.35);
    case 5:  // A: triangle
      return in_polygon(u, v, triangle);
    case 6:  // G: disk
      return r <= 0.85;
    case 7:  // C: open ring
      return r >= 0.5 && r <= 0.92 && !(u > 0.2 && std::abs(v) < 0.35);
    case 8:  // I
      return in_box(u, v, -0.25, 0.25, -0.95, 0.95);
    case 9:  // E
      return in_box(u, v, -0.8, -0.35, -0.9, 0.9) || in_box(u, v, -0.8, 0.8, -0.9, -0.55) ||
             in_box(u, v, -0.8, 0.6, -0.17, 0.17) || in_box(u, v, -0.8, 0.8, 0.55, 0.9);
    default:
      throw Error(ErrorCode::InvalidArgument, "gesture id out of range: " + std::to_string(id));
  }
}

}  // namespace

const std::vector<std::string>& gesture_labels() {
  static const std::vector<std::string> labels = {"S", "R", "T", "H", "X", "A", "G", "C", "I", "E"};
  return labels;
}

GrayImage render_gesture(int id, ImageDims dims, int dx, int dy) {
  if (id < 0 || id >= static_cast<int>(gesture_labels().size())) {
    throw Error(ErrorCode::InvalidArgument, "gesture id out of range: " + std::to_string(id));
  }
  GrayImage img(dims.width, dims.height, kBackground);
  const double unit = 0.42 * std::min(dims.width, dims.height);
  const double cx = (dims.width - 1) / 2.0 + dx;
  const double cy = (dims.height - 1) / 2.0 + dy;
  for (int y = 0; y < dims.height; ++y) {
    for (int x = 0; x < dims.width; ++x) {
      if (inside(id, (x - cx) / unit, (y - cy) / unit)) img(x, y) = kForeground;
    }
  }
  return img;
}

void salt_and_pepper(GrayImage& img, double fraction, std::mt19937_64& rng) {
  const auto total = img.size();
  const auto flips = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(total)));
  std::uniform_int_distribution<std::size_t> pick(0, total - 1);
  std::bernoulli_distribution salt(0.5);
  auto* px = img.pixels().data();
  for (std::size_t i = 0; i < flips; ++i) px[pick(rng)] = salt(rng) ? 255 : 0;
}

std::vector<Sample> make_corpus(const CorpusParams& params) {
  std::mt19937_64 rng(params.seed);
  std::uniform_int_distribution<int> shift(-params.max_shift, params.max_shift);
  std::vector<Sample> corpus;
  const auto& labels = gesture_labels();
  for (int id = 0; id < static_cast<int>(labels.size()); ++id) {
    for (int s = 0; s < params.samples_per_gesture; ++s) {
      const int dx = shift(rng);
      const int dy = shift(rng);
      GrayImage img = render_gesture(id, params.dims, dx, dy);
      salt_and_pepper(img, params.noise_fraction, rng);
      corpus.push_back({labels[static_cast<std::size_t>(id)], s, std::move(img)});
    }
  }
  return corpus;
}

void write_corpus(const std::vector<Sample>& corpus, const fs::path& root, int first, int last) {
  for (const auto& sample : corpus) {
    if (sample.index < first || sample.index >= last) continue;
    const fs::path dir = root / sample.label;
    fs::create_directories(dir);
    char name[32];
    std::snprintf(name, sizeof name, "%03d.pgm", sample.index);
    write_pgm_file(sample.image, dir / name);
  }
}

}  // namespace handsign::synthetic
