#include "snss/jointdiag.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "snss/loccov.hpp"

namespace snss {

void fix_row_signs(Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    Index arg = 0;
    m.row(i).cwiseAbs().maxCoeff(&arg);
    if (m(i, arg) < 0.0) m.row(i) *= -1.0;
  }
}

SimDiagResult simultaneous_diag(const Matrix& m1, const Matrix& m2) {
  if (m1.rows() != m1.cols() || m2.rows() != m2.cols() || m1.rows() != m2.rows()) {
    throw NumericError("simultaneous diagonalization needs two square matrices of equal size");
  }
  const Whitener white(m1);
  const Matrix& r = white.root();
  Matrix inner = r * m2 * r;
  inner = 0.5 * (inner + inner.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(inner);
  if (eig.info() != Eigen::Success) throw NumericError("generalized eigenproblem did not converge");

  // Eigen sorts ascending; reverse to decreasing.
  SimDiagResult out;
  out.D = eig.eigenvalues().reverse();
  const Matrix v = eig.eigenvectors().rowwise().reverse();
  out.W = v.transpose() * r;
  fix_row_signs(out.W);
  return out;
}

double diagonality(const Matrix& U, std::span<const Matrix> matrices) {
  double total = 0.0;
  for (const auto& m : matrices) total += (U * m * U.transpose()).diagonal().squaredNorm();
  return total;
}

JointDiagResult givens_joint_diag(std::span<const Matrix> matrices, const JointDiagOptions& options) {
  if (matrices.empty()) throw NumericError("joint diagonalization needs at least one matrix");
  const Index p = matrices.front().rows();
  for (const auto& m : matrices) {
    if (m.rows() != p || m.cols() != p) throw NumericError("joint diagonalization needs equally sized square matrices");
  }
  if (!(options.tol > 0.0)) throw ConfigError("joint diagonalization tolerance must be positive");

  std::vector<Matrix> work(matrices.begin(), matrices.end());
  // V accumulates the rotations; V^T M_k V is driven towards diagonal form.
  Matrix V = Matrix::Identity(p, p);

  JointDiagResult result;
  result.history.push_back(diagonality(V.transpose(), matrices));

  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    bool rotated = false;
    for (Index i = 0; i + 1 < p; ++i) {
      for (Index j = i + 1; j < p; ++j) {
        // 2x2 subproblem: maximize sum_k of the squared (i, j) diagonal
        // entries. With g_k = (m_ii - m_jj, 2 m_ij), the optimal angle is
        // half the polar angle of the leading eigenvector of sum_k g_k g_k^T.
        double g11 = 0.0;
        double g12 = 0.0;
        double g22 = 0.0;
        for (const auto& m : work) {
          const double a = m(i, i) - m(j, j);
          const double b = m(i, j) + m(j, i);
          g11 += a * a;
          g12 += a * b;
          g22 += b * b;
        }
        const double ton = g11 - g22;
        const double toff = 2.0 * g12;
        const double radius = std::hypot(ton, toff);
        if (radius == 0.0) continue;  // isotropic subproblem
        const double theta = 0.5 * std::atan2(toff, ton + radius);
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        if (std::abs(s) < options.tol) continue;
        rotated = true;

        for (auto& m : work) {
          // m <- G^T m G with G = [c -s; s c] acting on (i, j).
          for (Index k = 0; k < p; ++k) {
            const double mi = m(i, k);
            const double mj = m(j, k);
            m(i, k) = c * mi + s * mj;
            m(j, k) = -s * mi + c * mj;
          }
          for (Index k = 0; k < p; ++k) {
            const double mi = m(k, i);
            const double mj = m(k, j);
            m(k, i) = c * mi + s * mj;
            m(k, j) = -s * mi + c * mj;
          }
        }
        for (Index k = 0; k < p; ++k) {
          const double vi = V(k, i);
          const double vj = V(k, j);
          V(k, i) = c * vi + s * vj;
          V(k, j) = -s * vi + c * vj;
        }
      }
    }
    result.sweeps = sweep + 1;
    double crit = 0.0;
    for (const auto& m : work) crit += m.diagonal().squaredNorm();
    result.history.push_back(crit);
    if (!rotated) {
      result.converged = true;
      break;
    }
  }

  // Order rows by decreasing summed diagonal, then fix signs.
  Vector summed = Vector::Zero(p);
  for (const auto& m : work) summed += m.diagonal();
  std::vector<Index> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return summed(a) > summed(b); });

  result.U.resize(p, p);
  for (Index r = 0; r < p; ++r) result.U.row(r) = V.col(order[static_cast<std::size_t>(r)]).transpose();
  fix_row_signs(result.U);
  result.criterion = diagonality(result.U, matrices);
  return result;
}

}  // namespace snss
