#include "snss/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace snss {
namespace {

constexpr Index kExhaustiveLimit = 8;

std::vector<int> exhaustive_assignment(const Matrix& w) {
  const auto p = static_cast<int>(w.rows());
  std::vector<int> perm(static_cast<std::size_t>(p));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best = perm;
  double best_value = -std::numeric_limits<double>::infinity();
  do {
    double value = 0.0;
    for (int i = 0; i < p; ++i) value += w(i, perm[static_cast<std::size_t>(i)]);
    if (value > best_value) {
      best_value = value;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// Hungarian algorithm (shortest augmenting paths with potentials) for
/// the square minimum-cost assignment.
std::vector<int> hungarian_min(const Matrix& cost) {
  const auto n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<double> v(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<int> match(static_cast<std::size_t>(n + 1), 0);  // column -> row, 1-based
  std::vector<int> way(static_cast<std::size_t>(n + 1), 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n + 1), inf);
    std::vector<bool> used(static_cast<std::size_t>(n + 1), false);
    do {
      used[static_cast<std::size_t>(j0)] = true;
      const int i0 = match[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assignment(static_cast<std::size_t>(n), 0);
  for (int j = 1; j <= n; ++j) assignment[static_cast<std::size_t>(match[static_cast<std::size_t>(j)] - 1)] = j - 1;
  return assignment;
}

}  // namespace

std::vector<int> max_weight_assignment(const Matrix& weights) {
  if (weights.rows() != weights.cols()) throw DataError("assignment needs a square weight matrix");
  if (weights.rows() == 0) return {};
  if (weights.rows() <= kExhaustiveLimit) return exhaustive_assignment(weights);
  return hungarian_min(-weights);
}

double mdi(const Matrix& G) {
  const Index p = G.rows();
  if (G.cols() != p) throw DataError("MDI needs a square gain matrix");
  if (p < 2) throw DataError("MDI needs p >= 2");
  if (!G.allFinite()) throw DataError("MDI gain matrix has non-finite entries");

  Matrix g2 = G.array().square().matrix();
  for (Index i = 0; i < p; ++i) {
    const double row = g2.row(i).sum();
    if (!(row > 0.0)) throw DataError("MDI gain matrix has an all-zero row " + std::to_string(i + 1));
    g2.row(i) /= row;
  }
  const auto sigma = max_weight_assignment(g2);
  double best = 0.0;
  for (Index i = 0; i < p; ++i) best += g2(i, sigma[static_cast<std::size_t>(i)]);
  const double value = std::sqrt(std::max(0.0, static_cast<double>(p) - best) / static_cast<double>(p - 1));
  return std::min(value, 1.0);
}

double offdiag_fraction(const Matrix& M) {
  const double total = M.squaredNorm();
  if (total == 0.0) return 0.0;
  const double off = total - M.diagonal().squaredNorm();
  return std::sqrt(std::max(0.0, off) / total);
}

}  // namespace snss
