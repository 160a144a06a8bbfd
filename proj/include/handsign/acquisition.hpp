#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "handsign/imaging.hpp"

namespace handsign {

inline constexpr double kDefaultCadence = 1.0 / 3.0;

enum class SourceKind { IpCamera, Directory, Synthetic };
enum class IpMode { Snapshot, Mjpeg };

/// Where frames come from.
///
///   http://host[:port][/prefix]        snapshot polling of <prefix>/shot.jpg
///   mjpeg+http://host[:port][/prefix]  multipart stream from <prefix>/video
///   synthetic:static|moving[:N[:WxH]]  generated frames, N defaults to 30
///   anything else                      directory of .pgm/.jpg files
struct FrameSourceSpec {
  SourceKind kind = SourceKind::Directory;
  std::string endpoint;
  double cadence = kDefaultCadence;  // seconds per frame; 0 disables pacing
  IpMode ip_mode = IpMode::Snapshot;

  static FrameSourceSpec parse(std::string_view text, double cadence = kDefaultCadence);
};

struct Frame {
  GrayImage image;
  std::uint64_t sequence_no = 0;
  double timestamp = 0.0;  // seconds since the source was opened
};

/// Single-owner frame producer.
class FrameSource {
 public:
  virtual ~FrameSource() = default;

  /// Blocks until the cadence interval since the previous frame has elapsed,
  /// then acquires and decodes one frame. Throws EndOfStream when a finite
  /// source is exhausted, DecodeError for corrupt payloads and Timeout when
  /// no data arrives within 5 cadence intervals.
  virtual Frame next_frame() = 0;

  /// True for real-time sources that keep producing regardless of the consumer.
  virtual bool live() const noexcept = 0;

  const FrameSourceSpec& spec() const noexcept { return spec_; }

 protected:
  explicit FrameSource(FrameSourceSpec spec);

  /// Sleeps out the cadence and returns the new frame's timestamp.
  double pace();
  Frame make_frame(GrayImage image, double timestamp);

 private:
  FrameSourceSpec spec_;
  std::chrono::steady_clock::time_point opened_;
  std::chrono::steady_clock::time_point last_;
  bool paced_once_ = false;
  std::uint64_t next_sequence_ = 0;
};

/// Throws BadEndpoint for malformed endpoints and ConnectFailed when an IP
/// camera cannot be reached (after one retry).
std::unique_ptr<FrameSource> open_source(const FrameSourceSpec& spec);

/// Incremental multipart/x-mixed-replace splitter.
///
/// A part is released once the boundary that follows it has arrived, so the
/// trailing part of an unterminated stream is withheld. Bodies honor a
/// Content-Length header when present and otherwise end at the line break
/// before the next boundary.
class MjpegParser {
 public:
  static constexpr std::size_t kMaxHeaderBytes = 8 * 1024;
  static constexpr std::size_t kMaxPreambleBytes = 64 * 1024;

  /// `boundary` as given in the Content-Type parameter, without leading "--".
  explicit MjpegParser(std::string boundary);

  /// Appends bytes and returns every part completed by them. Throws
  /// HeaderTooLarge or MalformedStream.
  std::vector<std::vector<std::uint8_t>> feed(std::span<const std::uint8_t> chunk);

  bool started() const noexcept { return started_; }
  bool finished() const noexcept { return finished_; }
  std::size_t buffered() const noexcept { return buffer_.size(); }

 private:
  std::string delimiter_;
  std::string buffer_;
  bool started_ = false;
  bool finished_ = false;
};

/// Splits a complete stream. Empty input gives no parts; non-empty input
/// without any boundary throws MalformedStream.
std::vector<std::vector<std::uint8_t>> parse_mjpeg(std::span<const std::uint8_t> stream,
                                                   std::string_view boundary);

/// Boundary token from a Content-Type value, e.g.
/// "multipart/x-mixed-replace; boundary=frame" -> "frame". Strips quotes and
/// a leading "--" some servers include.
std::string boundary_from_content_type(std::string_view content_type);

}  // namespace handsign
