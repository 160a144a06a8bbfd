#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "handsign/eigen_sym.hpp"
#include "oracles.hpp"

using namespace handsign;

TEST_CASE("eigen_sym examples") {
  SUBCASE("identity") {
    const auto e = eigen_sym(Eigen::Matrix3d::Identity());
    CHECK(e.values.isApprox(Eigen::Vector3d::Ones()));
    CHECK(e.vectors.isApprox(Eigen::Matrix3d::Identity()));
    CHECK(e.sweeps == 0);
  }
  SUBCASE("2x2 closed form") {
    Eigen::Matrix2d s;
    s << 2, 1, 1, 2;
    const auto e = eigen_sym(s);
    // lambda = (a + d)/2 +- sqrt(((a - d)/2)^2 + b^2)
    CHECK(e.values(0) == doctest::Approx(3).epsilon(1e-14));
    CHECK(e.values(1) == doctest::Approx(1).epsilon(1e-14));
    const double r = 1 / std::sqrt(2.0);
    CHECK(e.vectors(0, 0) == doctest::Approx(r));
    CHECK(e.vectors(1, 0) == doctest::Approx(r));
    CHECK(e.vectors(0, 1) == doctest::Approx(r));
    CHECK(e.vectors(1, 1) == doctest::Approx(-r));
  }
  SUBCASE("diagonal is sorted") {
    const auto e = eigen_sym(Eigen::Vector3d(5, 2, 9).asDiagonal().toDenseMatrix());
    CHECK(e.values == Eigen::Vector3d(9, 5, 2));
  }
  SUBCASE("single precision instantiation") {
    Eigen::Matrix2f s;
    s << 4, 1, 1, 4;
    const auto e = eigen_sym(s, JacobiOptions{1e-6, 100, 1e-6});
    CHECK(e.values(0) == doctest::Approx(5.0f));
  }
}

TEST_CASE("eigen_sym errors") {
  Eigen::Matrix2d s;
  s << 1, 2, 3, 1;
  CHECK_THROWS_AS(eigen_sym(s), Error);
  try {
    eigen_sym(s);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotSymmetric);
  }

  std::mt19937_64 rng(30);
  const Eigen::MatrixXd r = oracle::random_symmetric(rng, 12);
  try {
    eigen_sym(r, JacobiOptions{1e-12, 1, 1e-9});
    FAIL("one sweep should not converge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoConvergence);
  }
}

TEST_CASE("eigen_sym on random symmetric matrices") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 40; ++i) {
    const int n = 1 + i % 25;
    const Eigen::MatrixXd s = oracle::random_symmetric(rng, n);
    const auto e = eigen_sym(s);
    const double norm = s.norm();

    for (int j = 0; j < n; ++j) {
      CHECK((s * e.vectors.col(j) - e.values(j) * e.vectors.col(j)).norm() <= 1e-8 * norm);
      if (j > 0) CHECK(e.values(j - 1) >= e.values(j));
    }
    CHECK((e.vectors.transpose() * e.vectors - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((e.vectors * e.values.asDiagonal() * e.vectors.transpose() - s).norm() <= 1e-8);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(s);
    const Eigen::VectorXd expect = ref.eigenvalues().reverse();
    CHECK((e.values - expect).cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, norm));
  }
}

TEST_CASE("eigen_sym handles repeated eigenvalues") {
  std::mt19937_64 rng(32);
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(oracle::random_symmetric(rng, 6)).householderQ();
  Eigen::VectorXd d(6);
  d << 4, 4, 4, 1, 1, 0;
  const Eigen::MatrixXd s = q * d.asDiagonal() * q.transpose();
  const auto e = eigen_sym(s);
  CHECK((e.values - d).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((e.vectors.transpose() * e.vectors - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-9);
}
