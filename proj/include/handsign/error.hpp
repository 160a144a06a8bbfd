#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace handsign {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  ImageTooSmall,
  // acquisition
  BadEndpoint,
  ConnectFailed,
  EndOfStream,
  DecodeError,
  Timeout,
  MalformedStream,
  HeaderTooLarge,
  // tokenizer
  NoContour,
  DegeneratePath,
  DegenerateSegment,
  // recognizers
  NotSymmetric,
  NoConvergence,
  TooFewSamples,
  RankDeficient,
  EmptyDataset,
  NonFiniteLoss,
  // dataset store
  BadMagic,
  BadHeader,
  TruncatedData,
  UnsupportedMaxval,
  EmptyDatabase,
  UnreadableImage,
  ChecksumMismatch,
  UnknownVersion,
  UnknownBackend,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. The code is the stable contract,
/// the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace handsign
