#include "handsign/tokenizer.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <string>

#include "handsign/error.hpp"

namespace handsign {
namespace {

// Clockwise on screen (y grows downward), starting at west.
constexpr std::array<Pixel, 8> kRing = {{
    {-1, 0}, {-1, -1}, {0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1},
}};

int ring_index(int dx, int dy) {
  for (int i = 0; i < 8; ++i) {
    if (kRing[i].x == dx && kRing[i].y == dy) return i;
  }
  return -1;
}

bool is_set(const BinaryImage& img, int x, int y) {
  return x >= 0 && y >= 0 && x < img.width() && y < img.height() && img(x, y);
}

ContourPath moore_trace(const BinaryImage& img, Pixel start) {
  ContourPath path{start};
  // The scan-order start pixel always has background to its west.
  int backtrack = 0;
  Pixel current = start;
  std::optional<Pixel> first_step;

  const std::size_t step_cap = 4 * img.size() + 8;
  for (std::size_t steps = 0; steps < step_cap; ++steps) {
    int found = -1;
    for (int i = 1; i <= 8; ++i) {
      const int d = (backtrack + i) % 8;
      if (is_set(img, current.x + kRing[d].x, current.y + kRing[d].y)) {
        found = d;
        break;
      }
    }
    if (found < 0) return path;  // isolated pixel

    const Pixel next{current.x + kRing[found].x, current.y + kRing[found].y};
    if (current == start && first_step && next == *first_step) {
      path.pop_back();  // closing visit of the start pixel
      return path;
    }
    if (!first_step) first_step = next;

    const int prev = (found + 7) % 8;
    const Pixel bg{current.x + kRing[prev].x, current.y + kRing[prev].y};
    backtrack = ring_index(bg.x - next.x, bg.y - next.y);
    current = next;
    path.push_back(current);
  }
  return path;
}

}  // namespace

ContourPath trace_contour(const BinaryImage& edges) {
  const int w = edges.width();
  const int h = edges.height();
  Raster<int> label = Raster<int>::Zero(h, w);
  std::vector<Pixel> stack;
  std::optional<ContourPath> best;
  int next_label = 0;

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!edges(x, y) || label(y, x) != 0) continue;

      // (x, y) is the first pixel of a new component in scan order.
      ++next_label;
      label(y, x) = next_label;
      stack.assign(1, Pixel{x, y});
      while (!stack.empty()) {
        const Pixel p = stack.back();
        stack.pop_back();
        for (const auto& o : kRing) {
          const int nx = p.x + o.x;
          const int ny = p.y + o.y;
          if (is_set(edges, nx, ny) && label(ny, nx) == 0) {
            label(ny, nx) = next_label;
            stack.push_back({nx, ny});
          }
        }
      }

      ContourPath boundary = moore_trace(edges, Pixel{x, y});
      if (!best || boundary.size() > best->size()) best = std::move(boundary);
    }
  }
  if (!best) throw Error(ErrorCode::NoContour, "edge map has no set pixels");
  return *best;
}

PointSet resample(const ContourPath& path, int count) {
  if (count < 2) throw Error(ErrorCode::InvalidArgument, "resample needs at least 2 points");
  const auto m = path.size();
  if (m < 2) throw Error(ErrorCode::DegeneratePath, "contour has fewer than 2 points");

  // cumulative[i] = arc length from path[0] to path[i]; cumulative[m] closes the loop.
  std::vector<double> cumulative(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const Pixel& a = path[i];
    const Pixel& b = path[(i + 1) % m];
    cumulative[i + 1] = cumulative[i] + std::hypot(double(b.x - a.x), double(b.y - a.y));
  }
  const double perimeter = cumulative[m];
  if (!(perimeter > 0.0)) throw Error(ErrorCode::DegeneratePath, "contour has zero arc length");

  PointSet out(2, count);
  std::size_t seg = 0;
  for (int j = 0; j < count; ++j) {
    const double target = perimeter * j / count;
    while (seg + 1 < m && cumulative[seg + 1] <= target) ++seg;
    const Pixel& a = path[seg];
    const Pixel& b = path[(seg + 1) % m];
    const double len = cumulative[seg + 1] - cumulative[seg];
    const double f = len > 0.0 ? (target - cumulative[seg]) / len : 0.0;
    out(0, j) = a.x + f * (b.x - a.x);
    out(1, j) = a.y + f * (b.y - a.y);
  }
  return out;
}

TokenSequence tokens(const PointSet& points) {
  const Eigen::Index n = points.cols();
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "tokens need at least 2 points");
  TokenSequence seq;
  seq.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector2d d = points.col((i + 1) % n) - points.col(i);
    const double h = std::hypot(d.x(), d.y());
    if (!(h > 0.0)) {
      throw Error(ErrorCode::DegenerateSegment, "points " + std::to_string(i) + " and " +
                                                    std::to_string((i + 1) % n) + " coincide");
    }
    seq.push_back({d.x() / h, d.y() / h});
  }
  return seq;
}

Eigen::VectorXd interleave(const TokenSequence& seq) {
  Eigen::VectorXd v(2 * static_cast<Eigen::Index>(seq.size()));
  for (std::size_t i = 0; i < seq.size(); ++i) {
    v(2 * i) = seq[i].cosine;
    v(2 * i + 1) = seq[i].sine;
  }
  return v;
}

}  // namespace handsign
