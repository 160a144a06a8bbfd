#include "handsign/nn.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>

#include "handsign/error.hpp"

namespace handsign {
namespace {

Eigen::VectorXd sigmoid(const Eigen::VectorXd& z) {
  return (1.0 / (1.0 + (-z.array()).exp())).matrix();
}

void check_io(const NnModel& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets) {
  if (inputs.rows() != net.input_width() || targets.rows() != net.output_width() ||
      inputs.cols() != targets.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "training inputs/targets do not match the network shape");
  }
}

// Output and hidden deltas of the per-sample loss 0.5 * ||y - t||^2.
struct Deltas {
  Eigen::VectorXd hidden_act;
  Eigen::VectorXd out;
  Eigen::VectorXd hidden;
};

Deltas backprop(const NnModel& net, const Eigen::Ref<const Eigen::VectorXd>& x,
                const Eigen::Ref<const Eigen::VectorXd>& t) {
  Deltas d;
  d.hidden_act = sigmoid(net.w1 * x + net.b1);
  const Eigen::VectorXd y = sigmoid(net.w2 * d.hidden_act + net.b2);
  d.out = ((y - t).array() * y.array() * (1.0 - y.array())).matrix();
  d.hidden = ((net.w2.transpose() * d.out).array() * d.hidden_act.array() * (1.0 - d.hidden_act.array())).matrix();
  return d;
}

}  // namespace

NnModel init_network(Eigen::Index inputs, Eigen::Index hidden, Eigen::Index outputs, std::uint64_t seed) {
  if (inputs < 1 || hidden < 1 || outputs < 1) {
    throw Error(ErrorCode::InvalidArgument, "network layers must be non-empty");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-0.5, 0.5);
  auto draw = [&](auto& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = uniform(rng);
  };
  NnModel net;
  net.w1.resize(hidden, inputs);
  net.b1.resize(hidden);
  net.w2.resize(outputs, hidden);
  net.b2.resize(outputs);
  draw(net.w1);
  draw(net.b1);
  draw(net.w2);
  draw(net.b2);
  return net;
}

Eigen::VectorXd forward(const NnModel& net, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != net.input_width()) {
    throw Error(ErrorCode::DimensionMismatch, "input has length " + std::to_string(x.size()) +
                                                  ", network expects " + std::to_string(net.input_width()));
  }
  return sigmoid(net.w2 * sigmoid(net.w1 * x + net.b1) + net.b2);
}

double mse(const NnModel& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets) {
  check_io(net, inputs, targets);
  double sum = 0.0;
  for (Eigen::Index s = 0; s < inputs.cols(); ++s) {
    sum += (forward(net, inputs.col(s)) - targets.col(s)).squaredNorm();
  }
  return sum / static_cast<double>(inputs.cols() * targets.rows());
}

NnGradient mse_gradient(const NnModel& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets) {
  check_io(net, inputs, targets);
  NnGradient g{Eigen::MatrixXd::Zero(net.w1.rows(), net.w1.cols()), Eigen::VectorXd::Zero(net.b1.size()),
               Eigen::MatrixXd::Zero(net.w2.rows(), net.w2.cols()), Eigen::VectorXd::Zero(net.b2.size())};
  for (Eigen::Index s = 0; s < inputs.cols(); ++s) {
    const Deltas d = backprop(net, inputs.col(s), targets.col(s));
    g.w2 += d.out * d.hidden_act.transpose();
    g.b2 += d.out;
    g.w1 += d.hidden * inputs.col(s).transpose();
    g.b1 += d.hidden;
  }
  const double scale = 2.0 / static_cast<double>(inputs.cols() * targets.rows());
  g.w1 *= scale;
  g.b1 *= scale;
  g.w2 *= scale;
  g.b2 *= scale;
  return g;
}

NnTrainResult train_network(NnModel net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                            const TrainParams& params) {
  if (!(params.learning_rate >= 0.0) || !std::isfinite(params.learning_rate)) {
    throw Error(ErrorCode::InvalidArgument, "learning rate must be finite and non-negative");
  }
  if (params.max_epochs < 1) throw Error(ErrorCode::InvalidArgument, "max_epochs must be >= 1");
  if (inputs.cols() == 0) throw Error(ErrorCode::EmptyDataset, "no training samples");
  check_io(net, inputs, targets);

  const double rate = params.learning_rate;
  NnTrainResult result;
  for (int epoch = 1; epoch <= params.max_epochs; ++epoch) {
    for (Eigen::Index s = 0; s < inputs.cols(); ++s) {
      const Deltas d = backprop(net, inputs.col(s), targets.col(s));
      net.w2.noalias() -= rate * d.out * d.hidden_act.transpose();
      net.b2 -= rate * d.out;
      net.w1.noalias() -= rate * d.hidden * inputs.col(s).transpose();
      net.b1 -= rate * d.hidden;
    }
    result.epochs = epoch;
    result.mse = mse(net, inputs, targets);
    if (!std::isfinite(result.mse)) {
      throw Error(ErrorCode::NonFiniteLoss, "training diverged at epoch " + std::to_string(epoch));
    }
    if (result.mse < params.target_mse) {
      result.converged = true;
      break;
    }
  }
  result.model = std::move(net);
  return result;
}

NnTrainResult train_nn(const std::vector<std::pair<TokenSequence, std::string>>& samples,
                       const TrainParams& params, ImageDims dims) {
  if (samples.empty()) throw Error(ErrorCode::EmptyDataset, "no training samples");
  const std::size_t token_count = samples.front().first.size();
  if (token_count == 0) throw Error(ErrorCode::InvalidArgument, "token sequences are empty");

  std::set<std::string> label_set;
  for (const auto& [seq, label] : samples) {
    if (seq.size() != token_count) {
      throw Error(ErrorCode::DimensionMismatch, "token sequences differ in length");
    }
    label_set.insert(label);
  }
  std::vector<std::string> labels(label_set.begin(), label_set.end());

  const auto n = static_cast<Eigen::Index>(samples.size());
  const auto width = static_cast<Eigen::Index>(2 * token_count);
  Eigen::MatrixXd inputs(width, n);
  Eigen::MatrixXd targets = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()), n);
  for (Eigen::Index s = 0; s < n; ++s) {
    const auto& [seq, label] = samples[static_cast<std::size_t>(s)];
    inputs.col(s) = interleave(seq);
    targets(std::lower_bound(labels.begin(), labels.end(), label) - labels.begin(), s) = 1.0;
  }

  NnModel net = init_network(width, params.hidden_width, static_cast<Eigen::Index>(labels.size()), params.seed);
  net.token_count = static_cast<int>(token_count);
  net.label_order = std::move(labels);
  net.dims = dims;
  return train_network(std::move(net), inputs, targets, params);
}

RankedMatches rank_outputs(const NnModel& net, const Eigen::VectorXd& outputs) {
  if (outputs.size() != net.output_width() ||
      static_cast<std::size_t>(outputs.size()) != net.label_order.size()) {
    throw Error(ErrorCode::DimensionMismatch, "output vector does not match label_order");
  }
  std::vector<double> scores(outputs.data(), outputs.data() + outputs.size());
  std::vector<double> distances(scores.size());
  std::transform(scores.begin(), scores.end(), distances.begin(), [](double y) { return 1.0 - y; });
  return rank_scores(net.label_order, scores, distances);
}

RankedMatches classify_nn(const NnModel& net, const TokenSequence& seq) {
  if (static_cast<int>(seq.size()) != net.token_count) {
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(net.token_count) + " tokens, got " +
                                                  std::to_string(seq.size()));
  }
  return rank_outputs(net, forward(net, interleave(seq)));
}

}  // namespace handsign
