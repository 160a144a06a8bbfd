#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "handsign/imaging.hpp"
#include "handsign/pca.hpp"

namespace handsign::synthetic {

/// Labels of the ten generated gestures, in gesture-id order.
const std::vector<std::string>& gesture_labels();

inline constexpr std::uint8_t kBackground = 10;
inline constexpr std::uint8_t kForeground = 220;

/// Renders gesture `id` (0..9) as a filled silhouette on a dark background,
/// centered and shifted by (dx, dy) pixels.
GrayImage render_gesture(int id, ImageDims dims, int dx = 0, int dy = 0);

/// Sets `fraction` of the pixels to 0 or 255 at random.
void salt_and_pepper(GrayImage& img, double fraction, std::mt19937_64& rng);

struct CorpusParams {
  ImageDims dims{60, 80};
  int samples_per_gesture = 10;
  int max_shift = 5;
  double noise_fraction = 0.01;
  std::uint64_t seed = 7;
};

struct Sample {
  std::string label;
  int index = 0;  // within its label
  GrayImage image;
};

/// samples_per_gesture noisy, randomly shifted renderings of each gesture,
/// grouped by label.
std::vector<Sample> make_corpus(const CorpusParams& params);

/// Writes samples with index in [first, last) as <root>/<label>/<index>.pgm.
void write_corpus(const std::vector<Sample>& corpus, const std::filesystem::path& root, int first, int last);

}  // namespace handsign::synthetic
