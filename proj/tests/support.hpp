#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "snss/types.hpp"

namespace snss::test {

inline Matrix random_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  return m;
}

/// Random invertible matrix with condition number below `max_cond`.
inline Matrix random_invertible(Index p, std::mt19937_64& rng, double max_cond = 50.0) {
  while (true) {
    Matrix b = random_matrix(p, p, rng);
    Eigen::JacobiSVD<Matrix> svd(b);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) > 0 && s(0) / s(s.size() - 1) < max_cond) return b;
  }
}

inline Matrix random_spd(Index p, std::mt19937_64& rng) {
  const Matrix b = random_matrix(p, p, rng);
  return b * b.transpose() + Matrix::Identity(p, p);
}

inline Matrix random_orthogonal(Index p, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(p, p, rng));
  Matrix q = qr.householderQ();
  return q;
}

/// Random generalized permutation matrix P S D.
inline Matrix random_psd(Index p, std::mt19937_64& rng) {
  std::vector<Index> perm(static_cast<std::size_t>(p));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  std::bernoulli_distribution flip(0.5);
  Matrix j = Matrix::Zero(p, p);
  for (Index i = 0; i < p; ++i) j(i, perm[static_cast<std::size_t>(i)]) = (flip(rng) ? -1.0 : 1.0) * scale(rng);
  return j;
}

/// Brute-force minimum distance index: every permutation, both signs of
/// every row, and the analytic optimal positive scale per row; the
/// distance ||J G - I||_F is evaluated on the assembled J.
inline double mdi_brute_force(const Matrix& G) {
  const Index p = G.rows();
  std::vector<Index> perm(static_cast<std::size_t>(p));
  std::iota(perm.begin(), perm.end(), Index{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    for (unsigned mask = 0; mask < (1u << p); ++mask) {
      Matrix J = Matrix::Zero(p, p);
      for (Index i = 0; i < p; ++i) {
        const Index src = perm[static_cast<std::size_t>(i)];
        const double sign = (mask >> i) & 1u ? -1.0 : 1.0;
        // minimize ||d * sign * g_src - e_i||^2 over d > 0
        const double d = std::max(0.0, sign * G(src, i) / G.row(src).squaredNorm());
        J(i, src) = sign * d;
      }
      best = std::min(best, (J * G - Matrix::Identity(p, p)).norm());
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / std::sqrt(static_cast<double>(p - 1));
}

/// Max |A - B| entrywise.
inline double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace snss::test
