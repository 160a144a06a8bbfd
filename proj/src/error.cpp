#include "handsign/error.hpp"

namespace handsign {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::BadEndpoint: return "BadEndpoint";
    case ErrorCode::ConnectFailed: return "ConnectFailed";
    case ErrorCode::EndOfStream: return "EndOfStream";
    case ErrorCode::DecodeError: return "DecodeError";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::MalformedStream: return "MalformedStream";
    case ErrorCode::HeaderTooLarge: return "HeaderTooLarge";
    case ErrorCode::NoContour: return "NoContour";
    case ErrorCode::DegeneratePath: return "DegeneratePath";
    case ErrorCode::DegenerateSegment: return "DegenerateSegment";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::TruncatedData: return "TruncatedData";
    case ErrorCode::UnsupportedMaxval: return "UnsupportedMaxval";
    case ErrorCode::EmptyDatabase: return "EmptyDatabase";
    case ErrorCode::UnreadableImage: return "UnreadableImage";
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::UnknownVersion: return "UnknownVersion";
    case ErrorCode::UnknownBackend: return "UnknownBackend";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace handsign
