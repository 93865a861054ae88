#include "snss/loccov.hpp"

#include <numeric>
#include <string>
#include <vector>

namespace snss {

Vector sample_mean(const Matrix& values) {
  if (values.rows() == 0) throw DataError("sample mean of an empty sample");
  return values.colwise().mean().transpose();
}

Matrix local_cov(const SpatialData& data, std::span<const Index> block, const KernelSpec& kernel,
                 const Vector& center) {
  if (block.empty()) throw DataError("local covariance of an empty block");
  const Index p = data.p();
  const auto m = static_cast<Index>(block.size());

  Matrix y(m, p);
  Matrix s(m, 2);
  for (Index a = 0; a < m; ++a) {
    y.row(a) = data.values.row(block[static_cast<std::size_t>(a)]) - center.transpose();
    s.row(a) = data.coords.row(block[static_cast<std::size_t>(a)]);
  }

  // M = Y^T F Y with F the pairwise weight matrix, accumulated one row of F
  // at a time: M += y_i (sum_j f_ij y_j)^T.
  const double support = kernel.support();
  const double support2 = support * support;
  Matrix acc = Matrix::Zero(p, p);
  Vector neighbor_sum(p);
  for (Index i = 0; i < m; ++i) {
    neighbor_sum.setZero();
    bool any = false;
    for (Index j = 0; j < m; ++j) {
      const double dx = s(i, 0) - s(j, 0);
      const double dy = s(i, 1) - s(j, 1);
      const double d2 = dx * dx + dy * dy;
      if (d2 > support2) continue;
      const double w = kernel.weight_at(std::hypot(dx, dy));
      if (w == 0.0) continue;
      neighbor_sum.noalias() += w * y.row(j).transpose();
      any = true;
    }
    if (any) acc.noalias() += y.row(i).transpose() * neighbor_sum.transpose();
  }
  acc /= static_cast<double>(m);
  return 0.5 * (acc + acc.transpose());
}

Matrix local_cov(const SpatialData& data, std::span<const Index> block, const KernelSpec& kernel) {
  return local_cov(data, block, kernel, sample_mean(data.values));
}

Matrix local_cov(const SpatialData& data, const KernelSpec& kernel) {
  std::vector<Index> all(static_cast<std::size_t>(data.n()));
  std::iota(all.begin(), all.end(), Index{0});
  return local_cov(data, all, kernel);
}

Whitener::Whitener(const Matrix& source) : source_(source) {
  if (source.rows() != source.cols() || source.rows() == 0) {
    throw NumericError("whitening needs a non-empty square matrix");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(source);
  if (eig.info() != Eigen::Success) throw NumericError("eigendecomposition failed while whitening");
  const Vector& lambda = eig.eigenvalues();
  const double largest = lambda.maxCoeff();
  const double smallest = lambda.minCoeff();
  if (!(largest > 0.0) || smallest <= kPositiveDefiniteTol * largest) {
    throw NumericError("not positive definite: smallest eigenvalue " + std::to_string(smallest) +
                       " (largest " + std::to_string(largest) + ")");
  }
  const Matrix& q = eig.eigenvectors();
  root_ = q * lambda.cwiseSqrt().cwiseInverse().asDiagonal() * q.transpose();
  root_ = 0.5 * (root_ + root_.transpose()).eval();
}

Matrix Whitener::apply(const Matrix& values, const Vector& center) const {
  return (values.rowwise() - center.transpose()) * root_;
}

}  // namespace snss
