#pragma once

#include <span>

#include "snss/geometry.hpp"
#include "snss/types.hpp"

namespace snss {

/// Column means of the value matrix; doubles as the location estimate T.
Vector sample_mean(const Matrix& values);

/// Sample local covariance matrix of a block,
///
///   M = 1/|B| * sum_{i in B} sum_{j in B} f(s_i - s_j) (x_i - c)(x_j - c)^T,
///
/// with c the supplied centering vector (normally the global sample mean).
/// Pairs are summed in row-major order and the result is symmetrized.
Matrix local_cov(const SpatialData& data, std::span<const Index> block, const KernelSpec& kernel,
                 const Vector& center);

/// Same as above, centered by the global sample mean of `data`.
Matrix local_cov(const SpatialData& data, std::span<const Index> block, const KernelSpec& kernel);

/// Local covariance over all n points.
Matrix local_cov(const SpatialData& data, const KernelSpec& kernel);

/// Relative eigenvalue floor below which a matrix is treated as singular.
inline constexpr double kPositiveDefiniteTol = 1e-10;

/// Symmetric inverse square root of an SPD matrix.
class Whitener {
 public:
  /// Throws NumericError("not positive definite") when the smallest
  /// eigenvalue is at most kPositiveDefiniteTol times the largest.
  explicit Whitener(const Matrix& source);

  const Matrix& root() const { return root_; }
  const Matrix& source() const { return source_; }

  /// Rows of (values - center) mapped through the root.
  Matrix apply(const Matrix& values, const Vector& center) const;

 private:
  Matrix source_;
  Matrix root_;
};

inline Whitener whiten(const Matrix& m0) { return Whitener(m0); }

}  // namespace snss
