#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "handsign/imaging.hpp"
#include "handsign/nn.hpp"
#include "handsign/pca.hpp"

namespace handsign {

// ---------------------------------------------------------------------------
// PGM (P5, maxval 255)

GrayImage read_pgm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> write_pgm(const GrayImage& img);

GrayImage read_pgm_file(const std::filesystem::path& path);
void write_pgm_file(const GrayImage& img, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Canonical geometry

struct Profile {
  std::string name;  // "webcam", "android" or "custom"
  ImageDims dims;

  static Profile webcam() { return {"webcam", {60, 80}}; }
  static Profile android() { return {"android", {100, 100}}; }
  static Profile custom(int width, int height) { return {"custom", {width, height}}; }

  /// "webcam", "android" or "<W>x<H>". Throws InvalidArgument otherwise.
  static Profile parse(std::string_view text);
  std::string to_string() const;
};

// ---------------------------------------------------------------------------
// Gesture database: <root>/<LABEL>/<name>.pgm|.jpg|.jpeg

struct GestureEntry {
  std::string label;
  std::filesystem::path path;
  GrayImage gray;     // resized to the profile
  BinaryImage bits;   // Otsu-binarized `gray`
};

struct GestureDB {
  std::filesystem::path root;
  Profile profile;
  std::vector<GestureEntry> entries;  // sorted by (label, filename)

  std::vector<std::string> labels() const;
};

/// Decodes a PGM or JPEG file (by extension) to grayscale.
GrayImage read_image_file(const std::filesystem::path& path);

bool is_image_file(const std::filesystem::path& path);
bool is_valid_label(std::string_view label);

GestureDB load_db(const std::filesystem::path& root, const Profile& profile);

// ---------------------------------------------------------------------------
// Model files
//
//   "HSRM" | u32 version = 1 | u8 backend (1 PCA, 2 NN) | u32 width | u32 height
//   | payload | u32 CRC-32 of every preceding byte
//
// Integers and reals are little-endian; arrays are a u64 count followed by
// that many f64 values, strings a u64 length followed by the bytes.

using Model = std::variant<PcaModel, NnModel>;

enum class Backend : std::uint8_t { Pca = 1, Nn = 2 };

inline constexpr std::uint32_t kModelVersion = 1;

Backend backend_of(const Model& model);
ImageDims dims_of(const Model& model);

std::vector<std::uint8_t> serialize_model(const Model& model);
Model deserialize_model(std::span<const std::uint8_t> bytes);

void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace handsign
