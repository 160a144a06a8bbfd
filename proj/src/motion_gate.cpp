#include "handsign/motion_gate.hpp"

#include <string>

#include "handsign/error.hpp"

namespace handsign {
namespace {

bool same_dims(const BinaryImage& a, const BinaryImage& b) {
  return a.width() == b.width() && a.height() == b.height();
}

}  // namespace

std::size_t motion_parameter(const BinaryImage& a, const BinaryImage& b, const BinaryImage& c) {
  if (!same_dims(a, b) || !same_dims(a, c)) {
    throw Error(ErrorCode::DimensionMismatch, "motion_parameter frames differ in size");
  }
  const auto& ba = a.bits();
  return static_cast<std::size_t>(((ba != b.bits()) || (ba != c.bits())).count());
}

MotionGate::MotionGate(int width, int height, ThresholdRule rule)
    : width_(width), height_(height), latched_(rule.fixed) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::DimensionMismatch, "motion gate needs positive dimensions");
  }
  threshold_ = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) / 100;
}

std::optional<GrayImage> MotionGate::push_frame(const GrayImage& frame) {
  if (frame.width() != width_ || frame.height() != height_) {
    throw Error(ErrorCode::DimensionMismatch,
                "frame is " + std::to_string(frame.width()) + "x" + std::to_string(frame.height()) +
                    ", gate expects " + std::to_string(width_) + "x" + std::to_string(height_));
  }
  if (!latched_) latched_ = otsu_threshold(frame);

  window_.push_back(Slot{frame, binarize(frame, *latched_)});
  if (window_.size() < 3) return std::nullopt;

  const std::size_t motion = motion_parameter(window_[0].bits, window_[1].bits, window_[2].bits);
  last_motion_ = motion;
  if (motion < threshold_) {
    GrayImage captured = std::move(window_.front().gray);
    window_.clear();
    return captured;
  }
  window_.pop_front();
  return std::nullopt;
}

}  // namespace handsign
