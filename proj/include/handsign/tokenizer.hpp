#pragma once

#include <vector>

#include <Eigen/Core>

#include "handsign/imaging.hpp"

namespace handsign {

/// Integer pixel location. x = column, y = row, origin top-left.
struct Pixel {
  int x = 0;
  int y = 0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
};

/// Closed boundary; consecutive points (and last -> first) are 8-neighbors.
using ContourPath = std::vector<Pixel>;

/// Real-valued contour samples, one per column of a 2 x T matrix (x; y).
using PointSet = Eigen::Matrix2Xd;

/// Unit direction of one contour segment.
struct Token {
  double cosine = 1.0;
  double sine = 0.0;
};

using TokenSequence = std::vector<Token>;

inline constexpr int kDefaultTokenCount = 32;

/// Moore-neighbor boundary of every 8-connected component, each traced
/// clockwise from its topmost-then-leftmost pixel. The longest boundary is
/// returned; ties go to the component whose start pixel comes first in scan
/// order. Throws NoContour on an empty image.
ContourPath trace_contour(const BinaryImage& edges);

/// T points spaced evenly by arc length along the closed polyline, starting
/// at path.front(). Throws DegeneratePath if the perimeter is zero.
PointSet resample(const ContourPath& path, int count);

/// One token per consecutive point pair, including the closing pair, so T
/// points give T tokens. Throws DegenerateSegment on repeated points.
TokenSequence tokens(const PointSet& points);

/// (cos0, sin0, cos1, sin1, ...) network input.
Eigen::VectorXd interleave(const TokenSequence& seq);

}  // namespace handsign
