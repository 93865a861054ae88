#pragma once

#include <vector>

#include "snss/types.hpp"

namespace snss {

/// Centered log-ratio transform of the rows of a strictly positive matrix.
Matrix clr(const Matrix& comp);

/// m x (m-1) pivot contrast matrix V with clr(x) V = ilr(x). Column j
/// (0-based) has sqrt((m-j-1)/(m-j)) in row j and -1/sqrt((m-j-1)(m-j))
/// in rows below it. For m = 3:
///
///   [  sqrt(2/3)      0        ]
///   [ -1/sqrt(6)   sqrt(1/2)   ]
///   [ -1/sqrt(6)  -sqrt(1/2)   ]
Matrix pivot_contrast(Index m);

struct IlrResult {
  Matrix coords;  // n x (m-1)
  Matrix V;       // m x (m-1)
};

/// Pivot coordinates z_j = sqrt((m-j)/(m-j+1)) log(x_j / gmean(x_{j+1..m})),
/// j = 1..m-1.
IlrResult ilr_pivot(const Matrix& comp);

/// Loadings W V^T mapping clr coordinates to latent components.
Matrix combined_loadings(const Matrix& W, const Matrix& V);

struct VarianceCell {
  double x = 0.0;  // cell center
  double y = 0.0;
  Index count = 0;
  bool has_variance = false;  // false when count < 2
  double variance = 0.0;
};

/// Moving-block variance map. Cell centers start at (min x, min y) and
/// step by grid_res up to the largest multiple not exceeding the maximum
/// coordinate; each cell reports the sample variance (n - 1 denominator)
/// of the scores in the block [c - size/2, c + size/2) around its center.
/// Cells are listed row by row (y outer, x inner).
std::vector<VarianceCell> moving_block_variance(const Vector& scores, const Coords& coords,
                                                double grid_res = 1.0, double block_size = 3.0);

}  // namespace snss
