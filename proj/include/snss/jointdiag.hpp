#pragma once

#include <span>
#include <vector>

#include "snss/types.hpp"

namespace snss {

struct SimDiagResult {
  Matrix W;  // W M1 W^T = I, W M2 W^T = diag(D)
  Vector D;  // decreasing
};

/// Exact simultaneous diagonalization of an SPD matrix M1 and a symmetric
/// M2 through the generalized symmetric eigenproblem. Rows of W are
/// signed so that their largest-magnitude entry is positive.
SimDiagResult simultaneous_diag(const Matrix& m1, const Matrix& m2);

struct JointDiagOptions {
  double tol = 1e-10;  // on |sin(theta)|
  int max_sweeps = 100;
};

struct JointDiagResult {
  Matrix U;                      // orthogonal, rows are the diagonalizing directions
  double criterion = 0.0;        // sum_k ||diag(U M_k U^T)||^2
  int sweeps = 0;
  bool converged = false;
  std::vector<double> history;   // criterion before the first sweep and after each sweep
};

/// Orthogonal approximate joint diagonalization by cyclic Givens (Jacobi)
/// sweeps. Each rotation maximizes the summed squared diagonal over the
/// pair it touches, so the criterion never decreases.
///
/// Starts at U = I and visits pairs (i, j), i < j, lexicographically.
/// Stops once every rotation of a sweep has |sin(theta)| < tol. The rows of
/// the returned U are ordered by decreasing sum_k (U M_k U^T)_ii and signed
/// so that each row's largest-magnitude entry is positive.
JointDiagResult givens_joint_diag(std::span<const Matrix> matrices, const JointDiagOptions& options = {});

/// sum_k ||diag(U M_k U^T)||_F^2
double diagonality(const Matrix& U, std::span<const Matrix> matrices);

/// Flips each row so that its largest-magnitude entry is positive.
void fix_row_signs(Matrix& m);

}  // namespace snss
