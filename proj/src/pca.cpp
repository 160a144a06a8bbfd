#include "handsign/pca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "handsign/eigen_sym.hpp"
#include "handsign/error.hpp"

namespace handsign {
namespace {

constexpr double kRankTolerance = 1e-12;
// Gram eigenvalues below this fraction of the largest are treated as null.
constexpr double kNullFraction = 1e-10;
constexpr double kDistanceGuard = 1e-9;

// Extends `basis` (orthonormal columns, first `filled` valid) with unit
// vectors orthogonal to everything before them, drawn from the standard basis.
void complete_basis(Eigen::MatrixXd& basis, Eigen::Index filled) {
  const Eigen::Index dim = basis.rows();
  Eigen::Index candidate = 0;
  for (Eigen::Index j = filled; j < basis.cols(); ++j) {
    for (;; ++candidate) {
      if (candidate >= dim) {
        throw Error(ErrorCode::RankDeficient, "cannot complete PCA basis");
      }
      Eigen::VectorXd e = Eigen::VectorXd::Unit(dim, candidate);
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index i = 0; i < j; ++i) e -= basis.col(i).dot(e) * basis.col(i);
      }
      const double norm = e.norm();
      if (norm > 0.5) {
        basis.col(j) = e / norm;
        ++candidate;
        break;
      }
    }
  }
}

// First component that is clearly nonzero made positive, as eigen_sym does,
// so both decomposition paths agree on orientation.
void orient(Eigen::MatrixXd& basis) {
  const double eps = Eigen::NumTraits<double>::dummy_precision();
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    for (Eigen::Index i = 0; i < basis.rows(); ++i) {
      if (std::abs(basis(i, j)) > eps) {
        if (basis(i, j) < 0) basis.col(j) *= -1.0;
        break;
      }
    }
  }
}

}  // namespace

Eigen::Index default_component_count(const TrainingSet& ts) {
  return std::min<Eigen::Index>({ts.vectors.cols(), ts.vectors.rows(), 20});
}

PcaModel train_pca(const TrainingSet& ts, Eigen::Index k, ImageDims dims, PcaMethod method) {
  const Eigen::Index n = ts.vectors.cols();
  const Eigen::Index dim = ts.vectors.rows();
  if (n < 2) throw Error(ErrorCode::TooFewSamples, "PCA needs at least 2 samples, got " + std::to_string(n));
  if (static_cast<Eigen::Index>(ts.labels.size()) != n) {
    throw Error(ErrorCode::DimensionMismatch, "label count does not match sample count");
  }
  if (k < 1 || k > std::min(n, dim)) {
    throw Error(ErrorCode::InvalidArgument,
                "component count " + std::to_string(k) + " outside [1, " + std::to_string(std::min(n, dim)) + "]");
  }

  PcaModel model;
  model.dims = dims;
  model.labels = ts.labels;
  model.mean = ts.vectors.rowwise().mean();
  const Eigen::MatrixXd centered = ts.vectors.colwise() - model.mean;
  const double divisor = static_cast<double>(n - 1);

  if (method == PcaMethod::Auto) method = dim > n ? PcaMethod::Snapshot : PcaMethod::Direct;

  if (method == PcaMethod::Direct) {
    const Eigen::MatrixXd cov = centered * centered.transpose() / divisor;
    const auto eig = eigen_sym(cov);
    if (eig.values(0) <= kRankTolerance) throw Error(ErrorCode::RankDeficient, "training vectors are constant");
    model.eigenvalues = eig.values.head(k).cwiseMax(0.0);
    model.basis = eig.vectors.leftCols(k);
  } else {
    const Eigen::MatrixXd gram = centered.transpose() * centered / divisor;
    const auto eig = eigen_sym(gram);
    if (eig.values(0) <= kRankTolerance) throw Error(ErrorCode::RankDeficient, "training vectors are constant");

    model.eigenvalues = eig.values.head(k).cwiseMax(0.0);
    model.basis.resize(dim, k);
    const double floor = kNullFraction * eig.values(0);
    Eigen::Index mapped = 0;
    for (; mapped < k && eig.values(mapped) > floor; ++mapped) {
      Eigen::VectorXd v = centered * eig.vectors.col(mapped);
      model.basis.col(mapped) = v / v.norm();
    }
    for (Eigen::Index j = mapped; j < k; ++j) model.eigenvalues(j) = 0.0;
    complete_basis(model.basis, mapped);
    orient(model.basis);
  }

  model.projections = model.basis.transpose() * centered;
  return model;
}

Eigen::VectorXd project(const PcaModel& model, const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (v.size() != model.feature_length()) {
    throw Error(ErrorCode::DimensionMismatch, "feature vector has length " + std::to_string(v.size()) +
                                                  ", model expects " + std::to_string(model.feature_length()));
  }
  return model.basis.transpose() * (v - model.mean);
}

RankedMatches classify_pca(const PcaModel& model, const Eigen::Ref<const Eigen::VectorXd>& v) {
  const Eigen::VectorXd coords = project(model, v);
  const Eigen::VectorXd dist = (model.projections.colwise() - coords).colwise().norm().transpose();

  const std::set<std::string> unique(model.labels.begin(), model.labels.end());
  std::vector<std::string> labels(unique.begin(), unique.end());
  std::vector<double> best(labels.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < model.labels.size(); ++i) {
    const auto slot = std::lower_bound(labels.begin(), labels.end(), model.labels[i]) - labels.begin();
    best[static_cast<std::size_t>(slot)] = std::min(best[static_cast<std::size_t>(slot)], dist(static_cast<Eigen::Index>(i)));
  }

  std::vector<double> scores(labels.size());
  std::transform(best.begin(), best.end(), scores.begin(), [](double d) { return 1.0 / (d + kDistanceGuard); });
  return rank_scores(labels, scores, best);
}

}  // namespace handsign
