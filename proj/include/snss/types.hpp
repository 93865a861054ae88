#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace snss {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Point = Eigen::Vector2d;
using Index = Eigen::Index;

/// n x 2 matrix of sample locations.
using Coords = Eigen::Matrix<double, Eigen::Dynamic, 2>;

/// Bad user-supplied parameters (method names, kernel radii, config keys).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data that cannot be processed: malformed CSV, empty blocks,
/// non-positive concentrations.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure: matrix not positive definite, factorization failed.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Observed field: n locations paired with an n x p value matrix.
struct SpatialData {
  Coords coords;
  Matrix values;

  Index n() const { return values.rows(); }
  Index p() const { return values.cols(); }

  /// Throws DataError when the shapes disagree, the sample is empty or an
  /// entry is not finite.
  void validate() const;
};

}  // namespace snss
