#include <random>

#include "doctest.h"
#include "snss/jointdiag.hpp"
#include "snss/metrics.hpp"
#include "support.hpp"

using namespace snss;

namespace {

Matrix diag(std::initializer_list<double> v) {
  Vector d(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) d(i++) = x;
  return d.asDiagonal();
}

double max_offdiag(const Matrix& m) {
  Matrix off = m;
  off.diagonal().setZero();
  return off.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_SUITE("jointdiag") {
  TEST_CASE("simultaneous diagonalization of diagonal matrices") {
    const auto r = simultaneous_diag(diag({1, 4}), diag({3, 4}));
    CHECK(r.D(0) == doctest::Approx(3.0));
    CHECK(r.D(1) == doctest::Approx(1.0));
    CHECK(test::max_abs_diff(r.W.cwiseAbs(), diag({1, 0.5})) < 1e-14);
  }

  TEST_CASE("equal matrices still satisfy both constraints") {
    const Matrix I = Matrix::Identity(3, 3);
    const auto r = simultaneous_diag(I, I);
    CHECK(test::max_abs_diff(r.D, Vector::Ones(3)) < 1e-14);
    CHECK(test::max_abs_diff(r.W * r.W.transpose(), I) < 1e-12);
  }

  TEST_CASE("generalized eigenvalues of B L B^T pencils") {
    std::mt19937_64 rng(10);
    for (int t = 0; t < 20; ++t) {
      const Matrix B = test::random_invertible(3, rng);
      const Matrix m1 = B * B.transpose();
      const Matrix m2 = B * diag({2, 5, 1}) * B.transpose();
      const auto r = simultaneous_diag(m1, m2);
      CHECK(test::max_abs_diff(r.D, Eigen::Vector3d(5, 2, 1)) < 1e-8);
      CHECK(test::max_abs_diff(r.W * m1 * r.W.transpose(), Matrix::Identity(3, 3)) < 1e-8);
      CHECK(max_offdiag(r.W * m2 * r.W.transpose()) < 1e-8);
      CHECK(mdi(r.W * B) < 1e-8);
    }
    CHECK_THROWS_AS(simultaneous_diag(-Matrix::Identity(2, 2), Matrix::Identity(2, 2)), NumericError);
  }

  TEST_CASE("already diagonal matrices are a fixed point") {
    const std::vector<Matrix> mats{diag({1, 2}), diag({3, 1})};
    const double before = diagonality(Matrix::Identity(2, 2), mats);
    const auto r = givens_joint_diag(mats);
    CHECK(r.converged);
    CHECK(r.criterion == doctest::Approx(before).epsilon(1e-14));
    // Rows reordered by decreasing summed diagonal (4 vs 3).
    CHECK(test::max_abs_diff(r.U.cwiseAbs(), Matrix::Identity(2, 2)) < 1e-14);
    CHECK(mdi(r.U) < 1e-12);
  }

  TEST_CASE("commuting families are recovered exactly") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 20; ++t) {
      const Matrix Q = test::random_orthogonal(3, rng);
      const std::vector<Matrix> mats{Q * diag({1, 2, 3}) * Q.transpose(), Q * diag({3, 1, 2}) * Q.transpose()};
      const auto r = givens_joint_diag(mats);
      CHECK(r.converged);
      CHECK(test::max_abs_diff(r.U * r.U.transpose(), Matrix::Identity(3, 3)) < 1e-10);
      CHECK(mdi(r.U * Q) < 1e-6);
      // U Q should itself be a signed permutation.
      CHECK(test::max_abs_diff((r.U * Q).cwiseAbs().colwise().maxCoeff(), Vector::Ones(3).transpose()) < 1e-6);
    }
  }

  TEST_CASE("single matrix reduces to an eigendecomposition") {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 10; ++t) {
      const Matrix m = test::random_spd(5, rng);
      const std::vector<Matrix> one{m};
      const auto r = givens_joint_diag(one);
      const Matrix d = r.U * m * r.U.transpose();
      CHECK(max_offdiag(d) < 1e-8);
      // Decreasing diagonal.
      for (Index i = 0; i + 1 < 5; ++i) CHECK(d(i, i) >= d(i + 1, i + 1));
    }
  }

  TEST_CASE("criterion never decreases and Frobenius mass is invariant") {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 30; ++t) {
      const Index p = 2 + t % 5;
      std::vector<Matrix> mats;
      for (int k = 0; k < 4; ++k) {
        Matrix a = test::random_matrix(p, p, rng);
        mats.push_back(a + a.transpose());
      }
      const auto r = givens_joint_diag(mats);
      for (std::size_t s = 1; s < r.history.size(); ++s) CHECK(r.history[s] >= r.history[s - 1] * (1 - 1e-12));
      double before = 0.0;
      double after = 0.0;
      for (const auto& m : mats) {
        before += m.squaredNorm();
        after += (r.U * m * r.U.transpose()).squaredNorm();
      }
      CHECK(after == doctest::Approx(before).epsilon(1e-12));
      CHECK(test::max_abs_diff(r.U.transpose() * r.U, Matrix::Identity(p, p)) < 1e-10);
    }
  }

  TEST_CASE("simultaneous and joint diagonalization agree on exact pairs") {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 10; ++t) {
      const Matrix B = test::random_invertible(4, rng);
      const Matrix m1 = B * diag({1, 2, 3, 4}) * B.transpose();
      const Matrix m2 = B * diag({4, 1, 6, 1.5}) * B.transpose();
      const auto sd = simultaneous_diag(m1, m2);
      // Joint route: whiten with m1, then jointly diagonalize the pair.
      Eigen::SelfAdjointEigenSolver<Matrix> eig(m1);
      const Matrix root = eig.operatorInverseSqrt();
      const std::vector<Matrix> mats{root * m1 * root, root * m2 * root};
      const auto jd = givens_joint_diag(mats);
      const Matrix w_jd = jd.U * root;
      Matrix a = sd.W;
      Matrix b = w_jd;
      a.rowwise().normalize();
      b.rowwise().normalize();
      CHECK(mdi(a * b.inverse()) < 1e-6);
    }
  }

  TEST_CASE("non-convergence is flagged, not thrown") {
    std::mt19937_64 rng(1);
    std::vector<Matrix> mats;
    for (int k = 0; k < 3; ++k) {
      Matrix a = test::random_matrix(6, 6, rng);
      mats.push_back(a + a.transpose());
    }
    const auto r = givens_joint_diag(mats, {1e-300, 1});
    CHECK_FALSE(r.converged);
    CHECK(r.sweeps == 1);
    CHECK_THROWS(givens_joint_diag(std::vector<Matrix>{}));
  }
}
