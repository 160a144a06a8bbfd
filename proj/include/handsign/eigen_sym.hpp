#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "handsign/error.hpp"

namespace handsign {

template <typename Scalar>
struct SymmetricEigen {
  /// Descending.
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;
  /// Orthonormal eigenvectors as columns, matching `values`. The first
  /// nonzero component of each column is positive.
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;
  int sweeps = 0;
};

struct JacobiOptions {
  double tolerance = 1e-12;  // off-diagonal Frobenius norm relative to ||S||_F
  int max_sweeps = 100;
  double symmetry_tolerance = 1e-9;
};

/// Cyclic Jacobi eigen-decomposition of a real symmetric matrix.
///
/// Sweeps over the strict upper triangle row by row, zeroing each a(p,q)
/// with one plane rotation, until the off-diagonal norm drops to
/// tolerance * ||S||_F. Throws NotSymmetric for asymmetric input and
/// NoConvergence when max_sweeps is exhausted.
template <typename Derived>
SymmetricEigen<typename Derived::Scalar> eigen_sym(const Eigen::MatrixBase<Derived>& input,
                                                   const JacobiOptions& opts = {}) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using std::abs;
  using std::sqrt;

  if (input.rows() != input.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "eigen_sym needs a square matrix, got " +
                                                  std::to_string(input.rows()) + "x" +
                                                  std::to_string(input.cols()));
  }
  const Eigen::Index n = input.rows();
  Matrix a = input;

  const Scalar scale = n > 0 ? a.cwiseAbs().maxCoeff() : Scalar(0);
  const Scalar asym = n > 0 ? (a - a.transpose()).cwiseAbs().maxCoeff() : Scalar(0);
  if (!(asym <= Scalar(opts.symmetry_tolerance) * scale)) {
    throw Error(ErrorCode::NotSymmetric, "max |S - S^T| exceeds tolerance");
  }
  a = (a + a.transpose()) / Scalar(2);

  Matrix v = Matrix::Identity(n, n);
  const Scalar target = Scalar(opts.tolerance) * a.norm();
  auto off_norm = [&] {
    Scalar sum(0);
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) sum += a(p, q) * a(p, q);
    return sqrt(Scalar(2) * sum);
  };

  int sweep = 0;
  while (off_norm() > target) {
    if (sweep == opts.max_sweeps) {
      throw Error(ErrorCode::NoConvergence,
                  "Jacobi did not converge in " + std::to_string(opts.max_sweeps) + " sweeps");
    }
    ++sweep;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        if (apq == Scalar(0)) continue;

        const Scalar theta = (a(q, q) - a(p, p)) / (Scalar(2) * apq);
        Scalar t = Scalar(1) / (abs(theta) + sqrt(theta * theta + Scalar(1)));
        if (theta < Scalar(0)) t = -t;
        const Scalar c = Scalar(1) / sqrt(t * t + Scalar(1));
        const Scalar s = t * c;

        for (Eigen::Index k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const Scalar akp = a(k, p);
          const Scalar akq = a(k, q);
          a(k, p) = a(p, k) = c * akp - s * akq;
          a(k, q) = a(q, k) = s * akp + c * akq;
        }
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = Scalar(0);

        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar vkp = v(k, p);
          const Scalar vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) > a(j, j); });

  SymmetricEigen<Scalar> out;
  out.sweeps = sweep;
  out.values.resize(n);
  out.vectors.resize(n, n);
  const Scalar sign_eps = Eigen::NumTraits<Scalar>::dummy_precision();
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto src = order[static_cast<std::size_t>(j)];
    out.values(j) = a(src, src);
    out.vectors.col(j) = v.col(src);
    for (Eigen::Index k = 0; k < n; ++k) {
      const Scalar x = out.vectors(k, j);
      if (abs(x) > sign_eps) {
        if (x < Scalar(0)) out.vectors.col(j) *= Scalar(-1);
        break;
      }
    }
  }
  return out;
}

}  // namespace handsign
