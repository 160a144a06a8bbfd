#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>

#include "handsign/imaging.hpp"

namespace handsign {

/// Popcount of (A xor B) or (A xor C).
std::size_t motion_parameter(const BinaryImage& a, const BinaryImage& b, const BinaryImage& c);

/// How the gate turns grayscale frames into bits. With no fixed value the
/// Otsu threshold of the first frame is latched for the rest of the session.
struct ThresholdRule {
  std::optional<std::uint8_t> fixed;

  static ThresholdRule otsu() { return {}; }
  static ThresholdRule at(std::uint8_t t) { return {t}; }
};

/// Three-frame static detector. Frame A (oldest) is captured when the motion
/// parameter of the window is strictly below floor(M*N/100).
class MotionGate {
 public:
  MotionGate(int width, int height, ThresholdRule rule = ThresholdRule::otsu());

  /// Returns the captured static frame, if this push completed one. The
  /// window is cleared after a capture, otherwise the oldest frame is evicted.
  std::optional<GrayImage> push_frame(const GrayImage& frame);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t threshold() const noexcept { return threshold_; }
  std::size_t window_size() const noexcept { return window_.size(); }
  /// Motion parameter of the most recent full window, if any.
  std::optional<std::size_t> last_motion() const noexcept { return last_motion_; }
  std::optional<std::uint8_t> latched_threshold() const noexcept { return latched_; }

  void reset() { window_.clear(); }

 private:
  struct Slot {
    GrayImage gray;
    BinaryImage bits;
  };

  int width_;
  int height_;
  std::size_t threshold_;
  std::optional<std::uint8_t> latched_;
  std::optional<std::size_t> last_motion_;
  std::deque<Slot> window_;
};

}  // namespace handsign
