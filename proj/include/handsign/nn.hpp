#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "handsign/pca.hpp"
#include "handsign/ranked_matches.hpp"
#include "handsign/tokenizer.hpp"

namespace handsign {

/// Feed-forward net with one hidden layer, logistic activations throughout.
struct NnModel {
  int token_count = 0;       // input width is 2 * token_count
  Eigen::MatrixXd w1;        // hidden x input
  Eigen::VectorXd b1;        // hidden
  Eigen::MatrixXd w2;        // output x hidden
  Eigen::VectorXd b2;        // output
  std::vector<std::string> label_order;
  ImageDims dims;

  Eigen::Index input_width() const noexcept { return w1.cols(); }
  Eigen::Index hidden_width() const noexcept { return w1.rows(); }
  Eigen::Index output_width() const noexcept { return w2.rows(); }
};

struct TrainParams {
  double learning_rate = 0.3;
  int max_epochs = 2000;
  double target_mse = 0.01;
  std::uint64_t seed = 42;
  int hidden_width = 32;
};

struct NnTrainResult {
  NnModel model;
  double mse = 0.0;
  int epochs = 0;
  bool converged = false;
};

/// Gradient of the dataset MSE with respect to every parameter.
struct NnGradient {
  Eigen::MatrixXd w1;
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;
  Eigen::VectorXd b2;
};

/// Uniform weights in [-0.5, 0.5] from a seeded generator.
NnModel init_network(Eigen::Index inputs, Eigen::Index hidden, Eigen::Index outputs, std::uint64_t seed);

/// y = s(W2 s(W1 x + b1) + b2), s the logistic sigmoid.
Eigen::VectorXd forward(const NnModel& net, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Mean over samples and outputs of (y - t)^2. Inputs and targets are columns.
double mse(const NnModel& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets);
NnGradient mse_gradient(const NnModel& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets);

/// Per-sample backpropagation in column order, one pass per epoch, stopping
/// once the epoch MSE reaches target_mse. `net` must already be initialized.
NnTrainResult train_network(NnModel net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                            const TrainParams& params);

/// Token sequences become interleaved inputs of width 2T; labels become
/// one-hot targets over the sorted label set.
NnTrainResult train_nn(const std::vector<std::pair<TokenSequence, std::string>>& samples,
                       const TrainParams& params, ImageDims dims = {});

/// percentage = 100 y_L / sum(y); distance = 1 - y_L; ties keep label_order.
RankedMatches classify_nn(const NnModel& net, const TokenSequence& seq);
RankedMatches rank_outputs(const NnModel& net, const Eigen::VectorXd& outputs);

}  // namespace handsign
