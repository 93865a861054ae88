#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "snss/types.hpp"

namespace snss {

/// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }

  static Rect square(double side) { return {0.0, 0.0, side, side}; }
  /// Tight bounding box of the coordinates.
  static Rect bounding_box(const Coords& coords);
};

/// n_side^2 points with both coordinates U(0,1) * n_side.
Coords gen_uniform_coords(int n_side, std::uint64_t seed);

/// n_side^2 points with x ~ Beta(2,5) * n_side and y ~ U(0,1) * n_side.
Coords gen_skewed_coords(int n_side, std::uint64_t seed);

/// `count` points uniformly distributed on the rectangle.
Matrix uniform_points(const Rect& domain, int count, std::uint64_t seed);

/// The 0.95 quantile of the standard normal distribution, frozen so that
/// Gauss kernel weights are bit-stable.
inline constexpr double kNormalQuantile95 = 1.6448536269514722;

/// Isotropic spatial kernel. F0 puts weight only on zero lags.
class KernelSpec {
 public:
  enum class Kind { F0, Ball, Ring, Gauss };

  static KernelSpec f0() { return KernelSpec(Kind::F0, 0.0, 0.0); }
  static KernelSpec ball(double r);
  static KernelSpec ring(double r1, double r2);
  static KernelSpec gauss(double r);

  /// Parses `f0`, `ball:R`, `ring:R1:R2` or `gauss:R`.
  static KernelSpec parse(std::string_view text);
  /// Parses a `+`-separated list, e.g. `f0+ring:0:2`.
  static std::vector<KernelSpec> parse_list(std::string_view text);

  Kind kind() const { return kind_; }
  double r1() const { return r1_; }
  double r2() const { return r2_; }

  /// Weight of a lag with Euclidean length `dist`.
  double weight_at(double dist) const;
  double weight(const Point& diff) const { return weight_at(std::hypot(diff.x(), diff.y())); }

  /// Largest lag with non-zero weight (infinity for Gauss).
  double support() const;

  std::string to_string() const;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;

 private:
  KernelSpec(Kind kind, double r1, double r2) : kind_(kind), r1_(r1), r2_(r2) {}

  Kind kind_;
  double r1_;
  double r2_;
};

std::string to_string(std::span<const KernelSpec> kernels);

inline double kernel_weight(const KernelSpec& spec, const Point& diff) {
  return spec.weight(diff);
}

/// Disjoint assignment of sample locations to blocks 0..K-1.
struct Partition {
  std::vector<int> block_of;
  int num_blocks = 0;

  /// Point indices of every block, in increasing index order.
  std::vector<std::vector<Index>> blocks() const;
  std::vector<Index> block_sizes() const;

  /// Single block holding all n points.
  static Partition whole(Index n);
};

/// How a domain is divided into sub-domains.
struct PartitionSpec {
  enum class Kind { Whole, Grid, NearestCenters };

  Kind kind = Kind::Whole;
  int kx = 1;
  int ky = 1;
  Matrix centers;  // m x 2, only for NearestCenters

  static PartitionSpec whole() { return {}; }
  static PartitionSpec halve_x() { return grid(2, 1); }
  static PartitionSpec halve_y() { return grid(1, 2); }
  static PartitionSpec grid(int kx, int ky);
  static PartitionSpec nearest_centers(Matrix centers);

  /// Parses `none`, `halve-x`, `halve-y`, `grid:KxK` or `grid:KX x KY`.
  static PartitionSpec parse(std::string_view text);
  std::string to_string() const;
};

/// Assigns every location to a block. Grid cells are half-open
/// [lo, hi) except on the upper domain edge, which is closed; points
/// outside the domain are clamped to the nearest cell. Nearest-center ties
/// go to the lowest center index.
Partition make_partition(const Coords& coords, const PartitionSpec& spec, const Rect& domain);

/// Throws DataError naming the first block with fewer than `min_size`
/// points.
void require_block_sizes(const Partition& partition, Index min_size);

}  // namespace snss
