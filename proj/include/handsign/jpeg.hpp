#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "handsign/imaging.hpp"

namespace handsign {

/// Decodes a baseline or progressive JPEG to grayscale via RGB luma.
/// Corrupt or truncated payloads throw DecodeError.
GrayImage decode_jpeg(std::span<const std::uint8_t> bytes);

/// Single-channel JPEG encode, used for fixtures and test servers.
std::vector<std::uint8_t> encode_jpeg(const GrayImage& img, int quality = 95);

bool looks_like_jpeg(std::span<const std::uint8_t> bytes) noexcept;

}  // namespace handsign
