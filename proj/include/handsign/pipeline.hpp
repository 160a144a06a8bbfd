#pragma once

#include <string>
#include <vector>

#include "handsign/dataset.hpp"
#include "handsign/nn.hpp"
#include "handsign/pca.hpp"
#include "handsign/tokenizer.hpp"

namespace handsign {

struct PipelineConfig {
  Profile profile = Profile::webcam();
  Backend backend = Backend::Pca;
  int token_count = kDefaultTokenCount;
  Eigen::Index pca_k = 0;  // 0 selects min(n, N, 20)
  TrainParams nn;
  std::string source;
  double cadence = 1.0 / 3.0;

  std::string to_string() const;
};

Backend parse_backend(std::string_view text);
std::string_view backend_name(Backend backend);

/// PCA path: resize, Otsu-binarize, flatten.
Eigen::VectorXd pca_features(const GrayImage& img, ImageDims dims);

/// NN path: resize, Sobel, edge map at the Otsu magnitude threshold, longest
/// contour, arc-length resampling, tokens.
TokenSequence nn_tokens(const GrayImage& img, ImageDims dims, int token_count);

struct TrainSummary {
  Model model;
  std::size_t samples = 0;
  std::size_t labels = 0;
  Eigen::Index features = 0;
  Eigen::Index components = 0;  // PCA
  int epochs = 0;                // NN
  double mse = 0.0;              // NN
  bool converged = true;
  std::size_t skipped = 0;       // images without a usable contour (NN)
};

TrainSummary train_model(const GestureDB& db, const PipelineConfig& config);

/// Preprocesses `img` for the model's backend and classifies it.
RankedMatches classify(const Model& model, const GrayImage& img);

struct EvalRow {
  std::string label;
  int trials = 0;
  int hits = 0;

  double percent() const { return trials == 0 ? 0.0 : 100.0 * hits / trials; }
};

struct Evaluation {
  std::vector<EvalRow> rows;  // sorted by label
  EvalRow overall{"Overall"};
};

Evaluation evaluate(const Model& model, const GestureDB& test_db);

/// "<label> <hits>/<trials> <percent>%" per label plus an Overall row.
std::string format_table(const Evaluation& eval);
/// label,trials,hits,percent
std::string format_csv(const Evaluation& eval);

}  // namespace handsign
