#include "snss/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>

#include "snss/rng.hpp"

namespace snss {
namespace {

double parse_number(std::string_view text, std::string_view context) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ConfigError("invalid number '" + std::string(text) + "' in '" + std::string(context) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // Prefer the shortest representation that round-trips.
  for (int prec = 1; prec <= 17; ++prec) {
    char shorter[64];
    std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
    if (std::strtod(shorter, nullptr) == v) return shorter;
  }
  return buf;
}

int grid_cell(double v, double lo, double hi, int k) {
  const double width = (hi - lo) / k;
  auto cell = static_cast<long>(std::floor((v - lo) / width));
  return static_cast<int>(std::clamp<long>(cell, 0, k - 1));
}

}  // namespace

Rect Rect::bounding_box(const Coords& coords) {
  if (coords.rows() == 0) throw DataError("bounding box of an empty coordinate set");
  return {coords.col(0).minCoeff(), coords.col(1).minCoeff(), coords.col(0).maxCoeff(),
          coords.col(1).maxCoeff()};
}

Coords gen_uniform_coords(int n_side, std::uint64_t seed) {
  if (n_side < 1) throw ConfigError("n_side must be at least 1");
  Engine engine = make_engine(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const Index n = static_cast<Index>(n_side) * n_side;
  Coords coords(n, 2);
  for (Index i = 0; i < n; ++i) coords(i, 0) = unif(engine) * n_side;
  for (Index i = 0; i < n; ++i) coords(i, 1) = unif(engine) * n_side;
  return coords;
}

Coords gen_skewed_coords(int n_side, std::uint64_t seed) {
  if (n_side < 1) throw ConfigError("n_side must be at least 1");
  Engine engine = make_engine(seed);
  std::gamma_distribution<double> gamma_a(2.0, 1.0);
  std::gamma_distribution<double> gamma_b(5.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const Index n = static_cast<Index>(n_side) * n_side;
  Coords coords(n, 2);
  // Beta(2,5) as X / (X + Y) with X ~ Gamma(2), Y ~ Gamma(5).
  for (Index i = 0; i < n; ++i) {
    const double a = gamma_a(engine);
    const double b = gamma_b(engine);
    coords(i, 0) = a / (a + b) * n_side;
  }
  for (Index i = 0; i < n; ++i) coords(i, 1) = unif(engine) * n_side;
  return coords;
}

Matrix uniform_points(const Rect& domain, int count, std::uint64_t seed) {
  Engine engine = make_engine(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix pts(count, 2);
  for (int i = 0; i < count; ++i) {
    pts(i, 0) = domain.x0 + unif(engine) * domain.width();
    pts(i, 1) = domain.y0 + unif(engine) * domain.height();
  }
  return pts;
}

KernelSpec KernelSpec::ball(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw ConfigError("ball kernel radius must be >= 0");
  return KernelSpec(Kind::Ball, r, 0.0);
}

KernelSpec KernelSpec::ring(double r1, double r2) {
  if (!(r1 >= 0.0) || !(r1 < r2) || !std::isfinite(r2)) {
    throw ConfigError("ring kernel needs 0 <= r1 < r2");
  }
  return KernelSpec(Kind::Ring, r1, r2);
}

KernelSpec KernelSpec::gauss(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("gauss kernel radius must be > 0");
  return KernelSpec(Kind::Gauss, r, 0.0);
}

KernelSpec KernelSpec::parse(std::string_view text) {
  const auto parts = split(text, ':');
  const auto name = parts.front();
  if (name == "f0" && parts.size() == 1) return f0();
  if (name == "ball" && parts.size() == 2) return ball(parse_number(parts[1], text));
  if (name == "gauss" && parts.size() == 2) return gauss(parse_number(parts[1], text));
  if (name == "ring" && parts.size() == 3) {
    return ring(parse_number(parts[1], text), parse_number(parts[2], text));
  }
  throw ConfigError("unknown kernel '" + std::string(text) + "' (expected f0, ball:R, ring:R1:R2 or gauss:R)");
}

std::vector<KernelSpec> KernelSpec::parse_list(std::string_view text) {
  std::vector<KernelSpec> kernels;
  if (text.empty() || text == "none") return kernels;
  for (auto part : split(text, '+')) kernels.push_back(parse(part));
  return kernels;
}

double KernelSpec::weight_at(double dist) const {
  switch (kind_) {
    case Kind::F0:
      return dist == 0.0 ? 1.0 : 0.0;
    case Kind::Ball:
      return dist <= r1_ ? 1.0 : 0.0;
    case Kind::Ring:
      return (r1_ < dist && dist <= r2_) ? 1.0 : 0.0;
    case Kind::Gauss: {
      const double t = kNormalQuantile95 * dist / r1_;
      return std::exp(-0.5 * t * t);
    }
  }
  return 0.0;
}

double KernelSpec::support() const {
  switch (kind_) {
    case Kind::F0:
      return 0.0;
    case Kind::Ball:
      return r1_;
    case Kind::Ring:
      return r2_;
    case Kind::Gauss:
      return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

std::string KernelSpec::to_string() const {
  switch (kind_) {
    case Kind::F0:
      return "f0";
    case Kind::Ball:
      return "ball:" + format_number(r1_);
    case Kind::Ring:
      return "ring:" + format_number(r1_) + ":" + format_number(r2_);
    case Kind::Gauss:
      return "gauss:" + format_number(r1_);
  }
  return {};
}

std::string to_string(std::span<const KernelSpec> kernels) {
  if (kernels.empty()) return "none";
  std::string out;
  for (const auto& k : kernels) {
    if (!out.empty()) out += '+';
    out += k.to_string();
  }
  return out;
}

std::vector<std::vector<Index>> Partition::blocks() const {
  std::vector<std::vector<Index>> out(static_cast<std::size_t>(num_blocks));
  for (std::size_t i = 0; i < block_of.size(); ++i) {
    out[static_cast<std::size_t>(block_of[i])].push_back(static_cast<Index>(i));
  }
  return out;
}

std::vector<Index> Partition::block_sizes() const {
  std::vector<Index> sizes(static_cast<std::size_t>(num_blocks), 0);
  for (int b : block_of) ++sizes[static_cast<std::size_t>(b)];
  return sizes;
}

Partition Partition::whole(Index n) {
  return {std::vector<int>(static_cast<std::size_t>(n), 0), 1};
}

PartitionSpec PartitionSpec::grid(int kx, int ky) {
  if (kx < 1 || ky < 1) throw ConfigError("grid partition needs kx, ky >= 1");
  PartitionSpec spec;
  spec.kind = Kind::Grid;
  spec.kx = kx;
  spec.ky = ky;
  return spec;
}

PartitionSpec PartitionSpec::nearest_centers(Matrix centers) {
  if (centers.cols() != 2 || centers.rows() < 2) {
    throw ConfigError("nearest-center partition needs at least two 2-d centers");
  }
  for (Index i = 0; i < centers.rows(); ++i) {
    for (Index j = i + 1; j < centers.rows(); ++j) {
      if (centers.row(i) == centers.row(j)) throw ConfigError("nearest-center partition has duplicate centers");
    }
  }
  PartitionSpec spec;
  spec.kind = Kind::NearestCenters;
  spec.centers = std::move(centers);
  return spec;
}

PartitionSpec PartitionSpec::parse(std::string_view text) {
  if (text == "none" || text == "whole") return whole();
  if (text == "halve-x") return halve_x();
  if (text == "halve-y") return halve_y();
  if (text.starts_with("grid:")) {
    const auto dims = text.substr(5);
    const auto x = dims.find('x');
    if (x != std::string_view::npos) {
      int kx = 0;
      int ky = 0;
      auto a = std::from_chars(dims.data(), dims.data() + x, kx);
      auto b = std::from_chars(dims.data() + x + 1, dims.data() + dims.size(), ky);
      if (a.ec == std::errc() && a.ptr == dims.data() + x && b.ec == std::errc() &&
          b.ptr == dims.data() + dims.size()) {
        return grid(kx, ky);
      }
    }
  }
  throw ConfigError("unknown partition '" + std::string(text) + "' (expected none, halve-x, halve-y or grid:KxK)");
}

std::string PartitionSpec::to_string() const {
  switch (kind) {
    case Kind::Whole:
      return "none";
    case Kind::Grid:
      if (kx == 2 && ky == 1) return "halve-x";
      if (kx == 1 && ky == 2) return "halve-y";
      return "grid:" + std::to_string(kx) + "x" + std::to_string(ky);
    case Kind::NearestCenters:
      return "centers:" + std::to_string(centers.rows());
  }
  return {};
}

Partition make_partition(const Coords& coords, const PartitionSpec& spec, const Rect& domain) {
  if (coords.rows() == 0) throw DataError("cannot partition an empty coordinate set");
  const auto n = static_cast<std::size_t>(coords.rows());
  Partition part;
  part.block_of.assign(n, 0);
  switch (spec.kind) {
    case PartitionSpec::Kind::Whole:
      part.num_blocks = 1;
      break;
    case PartitionSpec::Kind::Grid: {
      if (spec.kx < 1 || spec.ky < 1) throw ConfigError("grid partition needs kx, ky >= 1");
      if ((spec.kx > 1 && !(domain.width() > 0.0)) || (spec.ky > 1 && !(domain.height() > 0.0))) {
        throw DataError("grid partition needs a domain with positive side lengths");
      }
      part.num_blocks = spec.kx * spec.ky;
      for (std::size_t i = 0; i < n; ++i) {
        const auto r = static_cast<Index>(i);
        const int cx = spec.kx == 1 ? 0 : grid_cell(coords(r, 0), domain.x0, domain.x1, spec.kx);
        const int cy = spec.ky == 1 ? 0 : grid_cell(coords(r, 1), domain.y0, domain.y1, spec.ky);
        part.block_of[i] = cy * spec.kx + cx;
      }
      break;
    }
    case PartitionSpec::Kind::NearestCenters: {
      const Matrix& c = spec.centers;
      part.num_blocks = static_cast<int>(c.rows());
      for (std::size_t i = 0; i < n; ++i) {
        const auto r = static_cast<Index>(i);
        double best = std::numeric_limits<double>::infinity();
        int best_k = 0;
        for (Index k = 0; k < c.rows(); ++k) {
          const double dx = coords(r, 0) - c(k, 0);
          const double dy = coords(r, 1) - c(k, 1);
          const double d2 = dx * dx + dy * dy;
          if (d2 < best) {
            best = d2;
            best_k = static_cast<int>(k);
          }
        }
        part.block_of[i] = best_k;
      }
      break;
    }
  }
  return part;
}

void require_block_sizes(const Partition& partition, Index min_size) {
  const auto sizes = partition.block_sizes();
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    if (sizes[k] < min_size) {
      throw DataError("block " + std::to_string(k + 1) + " has " + std::to_string(sizes[k]) +
                      " points, need at least " + std::to_string(min_size));
    }
  }
}

}  // namespace snss
