#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "handsign/ranked_matches.hpp"

namespace handsign {

/// Canonical image geometry a model was trained at.
struct ImageDims {
  int width = 0;
  int height = 0;
  friend bool operator==(const ImageDims&, const ImageDims&) = default;
};

/// n feature vectors of length N stored as the columns of an N x n matrix.
struct TrainingSet {
  Eigen::MatrixXd vectors;
  std::vector<std::string> labels;
};

struct PcaModel {
  Eigen::VectorXd mean;          // N
  Eigen::MatrixXd basis;         // N x k, orthonormal columns
  Eigen::VectorXd eigenvalues;   // k, descending, >= 0
  Eigen::MatrixXd projections;   // k x n, one column per training vector
  std::vector<std::string> labels;
  ImageDims dims;

  Eigen::Index feature_length() const noexcept { return mean.size(); }
  Eigen::Index components() const noexcept { return basis.cols(); }
};

enum class PcaMethod {
  Auto,      // snapshot when N > n, direct otherwise
  Snapshot,  // eigen-decompose the n x n Gram matrix
  Direct,    // eigen-decompose the N x N covariance
};

/// min(n, N, 20).
Eigen::Index default_component_count(const TrainingSet& ts);

/// Mean-centers, eigen-decomposes the sample covariance (divisor n - 1) and
/// keeps the top k eigenvectors.
///
/// On the snapshot path each Gram eigenvector u maps to A u / ||A u||.
/// Directions whose eigenvalue is numerically zero cannot be mapped that way
/// and are filled with an orthonormal completion instead, so a complete basis
/// (k = min(n, N)) is always available.
PcaModel train_pca(const TrainingSet& ts, Eigen::Index k, ImageDims dims = {},
                   PcaMethod method = PcaMethod::Auto);

/// basis^T (v - mean).
Eigen::VectorXd project(const PcaModel& model, const Eigen::Ref<const Eigen::VectorXd>& v);

/// Nearest exemplar per label in PC space; percentages by inverse distance.
RankedMatches classify_pca(const PcaModel& model, const Eigen::Ref<const Eigen::VectorXd>& v);

}  // namespace handsign
