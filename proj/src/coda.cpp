#include "snss/coda.hpp"

#include <cmath>
#include <string>

namespace snss {

Matrix clr(const Matrix& comp) {
  if (comp.cols() < 2) throw DataError("compositions need at least two parts");
  Matrix logs(comp.rows(), comp.cols());
  for (Index i = 0; i < comp.rows(); ++i) {
    for (Index j = 0; j < comp.cols(); ++j) {
      const double v = comp(i, j);
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw DataError("non-positive concentration at row " + std::to_string(i + 1) + ", column " +
                        std::to_string(j + 1));
      }
      logs(i, j) = std::log(v);
    }
  }
  return logs.colwise() - logs.rowwise().mean();
}

Matrix pivot_contrast(Index m) {
  if (m < 2) throw DataError("contrast matrix needs at least two parts");
  Matrix V = Matrix::Zero(m, m - 1);
  for (Index j = 0; j + 1 < m; ++j) {
    const auto rest = static_cast<double>(m - j - 1);  // parts after the pivot
    V(j, j) = std::sqrt(rest / (rest + 1.0));
    const double below = -1.0 / std::sqrt(rest * (rest + 1.0));
    for (Index k = j + 1; k < m; ++k) V(k, j) = below;
  }
  return V;
}

IlrResult ilr_pivot(const Matrix& comp) {
  IlrResult out;
  out.V = pivot_contrast(comp.cols());
  out.coords = clr(comp) * out.V;
  return out;
}

Matrix combined_loadings(const Matrix& W, const Matrix& V) {
  if (W.cols() != V.cols()) {
    throw DataError("loadings: unmixing matrix has " + std::to_string(W.cols()) + " columns, contrast matrix has " +
                    std::to_string(V.cols()));
  }
  return W * V.transpose();
}

std::vector<VarianceCell> moving_block_variance(const Vector& scores, const Coords& coords, double grid_res,
                                                double block_size) {
  if (!(grid_res > 0.0) || !(block_size > 0.0)) throw ConfigError("grid resolution and block size must be positive");
  if (scores.size() != coords.rows()) throw DataError("variance map: score and coordinate counts differ");
  if (coords.rows() == 0) return {};

  const double x0 = coords.col(0).minCoeff();
  const double y0 = coords.col(1).minCoeff();
  // Small slack so that extents that are exact multiples of the resolution
  // keep their last center despite rounding.
  const auto steps = [&](double extent) {
    return static_cast<Index>(std::floor(extent / grid_res + 1e-9));
  };
  const Index nx = steps(coords.col(0).maxCoeff() - x0) + 1;
  const Index ny = steps(coords.col(1).maxCoeff() - y0) + 1;
  const double half = 0.5 * block_size;

  std::vector<VarianceCell> cells;
  cells.reserve(static_cast<std::size_t>(nx * ny));
  for (Index iy = 0; iy < ny; ++iy) {
    for (Index ix = 0; ix < nx; ++ix) {
      VarianceCell cell;
      cell.x = x0 + static_cast<double>(ix) * grid_res;
      cell.y = y0 + static_cast<double>(iy) * grid_res;
      double sum = 0.0;
      double sum_sq = 0.0;
      // Two-pass variance: collect the mean first.
      for (Index i = 0; i < coords.rows(); ++i) {
        const double dx = coords(i, 0) - cell.x;
        const double dy = coords(i, 1) - cell.y;
        if (dx >= -half && dx < half && dy >= -half && dy < half) {
          ++cell.count;
          sum += scores(i);
        }
      }
      if (cell.count >= 2) {
        const double mean = sum / static_cast<double>(cell.count);
        for (Index i = 0; i < coords.rows(); ++i) {
          const double dx = coords(i, 0) - cell.x;
          const double dy = coords(i, 1) - cell.y;
          if (dx >= -half && dx < half && dy >= -half && dy < half) {
            const double d = scores(i) - mean;
            sum_sq += d * d;
          }
        }
        cell.has_variance = true;
        cell.variance = sum_sq / static_cast<double>(cell.count - 1);
      }
      cells.push_back(cell);
    }
  }
  return cells;
}

}  // namespace snss
