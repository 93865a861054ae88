#pragma once

#include <vector>

#include "snss/types.hpp"

namespace snss {

/// Minimum distance index of a gain matrix G = W A:
///
///   MDI(G) = 1/sqrt(p-1) * inf_J ||J G - I||_F,
///
/// J ranging over matrices with exactly one non-zero entry per row and
/// column. Optimizing the scale of each row in closed form leaves
///
///   MDI(G)^2 = (p - max_sigma sum_i gt_{i,sigma(i)}) / (p - 1),
///   gt_ij = g_ij^2 / sum_k g_ik^2,
///
/// a linear assignment problem: exhaustive for p <= 8, Hungarian above.
/// Throws DataError for p < 2 or a zero row.
double mdi(const Matrix& G);

/// Optimal assignment maximizing sum_i weights(i, sigma(i)); returns sigma.
std::vector<int> max_weight_assignment(const Matrix& weights);

/// ||off(M)||_F / ||M||_F, zero for the zero matrix.
double offdiag_fraction(const Matrix& M);

}  // namespace snss
