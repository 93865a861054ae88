#include "snss/fields.hpp"

#include <cmath>
#include <string>

namespace snss {
namespace {

/// Gamma(nu) 2^(nu - 1), the zero-lag limit of x^nu K_nu(x).
double matern_norm(double nu) { return std::tgamma(nu) * std::exp2(nu - 1.0); }

/// Matern correlation x^nu K_nu(x) / (Gamma(nu) 2^(nu-1)) at scaled lag x.
/// Half-integer shapes use their exact elementary forms.
double matern_corr(double nu, double x) {
  if (x == 0.0) return 1.0;
  if (nu == 0.5) return std::exp(-x);
  if (nu == 1.5) return (1.0 + x) * std::exp(-x);
  if (nu == 2.5) return (1.0 + x + x * x / 3.0) * std::exp(-x);
  if (x > 700.0) return 0.0;
  return std::pow(x, nu) * std::cyl_bessel_k(nu, x) / matern_norm(nu);
}

void check_params(const MaternParams& p) {
  if (!(p.sigma2 > 0.0) || !(p.nu > 0.0) || !(p.phi > 0.0)) {
    throw ConfigError("Matern parameters must be strictly positive");
  }
}

/// Constants of the non-stationary covariance between two parameter
/// triples, independent of the lag.
struct PairConstants {
  double scale;      // prefactor multiplying the correlation term
  double inv_range;  // multiplies |s - s2| to give |h~|
  double nu;         // averaged shape

  PairConstants(const MaternParams& a, const MaternParams& b) {
    const double qa = a.phi * a.phi / (4.0 * a.nu);
    const double qb = b.phi * b.phi / (4.0 * b.nu);
    const double half_sum = 0.5 * (qa + qb);
    nu = 0.5 * (a.nu + b.nu);
    inv_range = 1.0 / std::sqrt(half_sum);
    scale = std::sqrt(a.sigma2 * b.sigma2) * std::sqrt(qa / matern_norm(a.nu)) *
            std::sqrt(qb / matern_norm(b.nu)) / half_sum * matern_norm(nu);
  }

  double at(double dist) const { return scale * matern_corr(nu, dist * inv_range); }
};

double distance(const Coords& c, Index i, Index j) {
  const double dx = c(i, 0) - c(j, 0);
  const double dy = c(i, 1) - c(j, 1);
  return std::sqrt(dx * dx + dy * dy);
}

void check_clusters(const Coords& coords, const Partition& clusters, const SettingSpec& setting) {
  if (static_cast<Index>(clusters.block_of.size()) != coords.rows()) {
    throw DataError("cluster assignment size does not match the number of locations");
  }
  for (int b : clusters.block_of) {
    if (b < 0 || b >= kSettingClusters) {
      throw ConfigError("setting " + std::to_string(setting.id) + " has no parameters for cluster " +
                        std::to_string(b + 1));
    }
  }
}

}  // namespace

double matern_cov(double h, const MaternParams& params) {
  check_params(params);
  if (h < 0.0) throw ConfigError("Matern lag must be non-negative");
  return params.sigma2 * matern_corr(params.nu, h / params.phi);
}

double nonstat_matern_cov(const Point& s, const MaternParams& a, const Point& s2, const MaternParams& b) {
  check_params(a);
  check_params(b);
  return PairConstants(a, b).at((s - s2).norm());
}

double nonstat_matern_cov(const Point& s, int cluster_s, const Point& s2, int cluster_s2,
                          const ClusterParamField& field) {
  const auto n = static_cast<int>(field.per_cluster.size());
  if (cluster_s < 0 || cluster_s >= n || cluster_s2 < 0 || cluster_s2 >= n) {
    throw ConfigError("no Matern parameters for the requested cluster");
  }
  return nonstat_matern_cov(s, field.per_cluster[static_cast<std::size_t>(cluster_s)], s2,
                            field.per_cluster[static_cast<std::size_t>(cluster_s2)]);
}

SettingSpec SettingSpec::standard(int id) {
  if (id < 1 || id > 6) throw ConfigError("setting id must be in 1..6, got " + std::to_string(id));

  // Per-cluster variances of Setting 1: diag(1,3,2), diag(2,4,2), diag(1,3,5).
  constexpr double kVariance[kSettingComponents][kSettingClusters] = {{1, 2, 1}, {3, 4, 3}, {2, 2, 5}};
  // (nu, phi) per component and cluster for Settings 2-5.
  constexpr double kShapeRange[kSettingComponents][kSettingClusters][2] = {
      {{0.5, 0.5}, {1.0, 1.0}, {1.0, 2.0}},
      {{1.5, 2.7}, {0.7, 1.0}, {1.2, 1.9}},
      {{1.2, 1.4}, {0.5, 3.0}, {0.7, 0.7}},
  };
  // Setting 6: one stationary (nu, phi) per component.
  constexpr double kStationary[kSettingComponents][2] = {{0.5, 1.0}, {1.0, 1.5}, {1.5, 2.0}};

  SettingSpec spec;
  spec.id = id;
  const bool varying_variance = (id == 1 || id == 3 || id == 5);
  for (int c = 0; c < kSettingComponents; ++c) {
    for (int k = 0; k < kSettingClusters; ++k) {
      auto& p = spec.params[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)];
      p.sigma2 = varying_variance ? kVariance[c][k] : 1.0;
      if (id == 6) {
        p.nu = kStationary[c][0];
        p.phi = kStationary[c][1];
      } else {
        p.nu = kShapeRange[c][k][0];
        p.phi = kShapeRange[c][k][1];
      }
    }
  }
  switch (id) {
    case 1:
      spec.structure = Structure::WhiteNoise;
      break;
    case 2:
    case 3:
      spec.structure = Structure::ClusterMatern;
      break;
    case 4:
    case 5:
      spec.structure = Structure::NonstatMatern;
      break;
    default:
      spec.structure = Structure::StationaryMatern;
      break;
  }
  return spec;
}

Matrix build_component_cov(const Coords& coords, const Partition& clusters, const SettingSpec& setting,
                           int component) {
  if (component < 0 || component >= kSettingComponents) {
    throw ConfigError("setting " + std::to_string(setting.id) + " has no component " + std::to_string(component + 1));
  }
  check_clusters(coords, clusters, setting);
  const auto& table = setting.params[static_cast<std::size_t>(component)];
  const Index n = coords.rows();
  auto cluster = [&](Index i) { return clusters.block_of[static_cast<std::size_t>(i)]; };
  auto params = [&](Index i) -> const MaternParams& { return table[static_cast<std::size_t>(cluster(i))]; };

  Matrix cov = Matrix::Zero(n, n);
  switch (setting.structure) {
    case SettingSpec::Structure::WhiteNoise:
      for (Index i = 0; i < n; ++i) cov(i, i) = params(i).sigma2;
      break;
    case SettingSpec::Structure::ClusterMatern:
      for (Index j = 0; j < n; ++j) {
        for (Index i = j; i < n; ++i) {
          if (cluster(i) != cluster(j)) continue;
          cov(i, j) = cov(j, i) = matern_cov(distance(coords, i, j), params(i));
        }
      }
      break;
    case SettingSpec::Structure::NonstatMatern: {
      std::vector<PairConstants> pairs;
      for (int a = 0; a < kSettingClusters; ++a) {
        for (int b = 0; b < kSettingClusters; ++b) {
          check_params(table[static_cast<std::size_t>(a)]);
          pairs.emplace_back(table[static_cast<std::size_t>(a)], table[static_cast<std::size_t>(b)]);
        }
      }
      for (Index j = 0; j < n; ++j) {
        for (Index i = j; i < n; ++i) {
          const auto& pc = pairs[static_cast<std::size_t>(cluster(i) * kSettingClusters + cluster(j))];
          cov(i, j) = cov(j, i) = pc.at(distance(coords, i, j));
        }
      }
      break;
    }
    case SettingSpec::Structure::StationaryMatern: {
      const MaternParams& p = table[0];
      for (Index j = 0; j < n; ++j) {
        for (Index i = j; i < n; ++i) cov(i, j) = cov(j, i) = matern_cov(distance(coords, i, j), p);
      }
      break;
    }
  }
  return cov;
}

Vector sample_gaussian(const Matrix& cov, Engine& engine) {
  const Index n = cov.rows();
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector xi(n);
  for (Index i = 0; i < n; ++i) xi(i) = normal(engine);

  Eigen::LLT<Matrix> llt(cov);
  double jitter = 1e-10 * cov.trace() / static_cast<double>(n);
  for (int attempt = 0; llt.info() != Eigen::Success; ++attempt) {
    if (attempt == 3) throw NumericError("covariance factorization failed after jitter retries");
    Matrix jittered = cov;
    jittered.diagonal().array() += jitter;
    llt.compute(jittered);
    jitter *= 10.0;
  }
  return llt.matrixL() * xi;
}

SpatialData sample_setting(const Coords& coords, const Partition& clusters, const SettingSpec& setting,
                           std::uint64_t seed) {
  check_clusters(coords, clusters, setting);
  const Index n = coords.rows();
  if (setting.A.rows() != kSettingComponents || setting.A.cols() != kSettingComponents ||
      setting.b.size() != kSettingComponents) {
    throw ConfigError("mixing matrix must be 3 x 3 and shift of length 3");
  }

  Matrix z(n, kSettingComponents);
  for (int c = 0; c < kSettingComponents; ++c) {
    Engine engine = make_engine(derive_seed(seed, {static_cast<std::uint64_t>(c)}));
    const auto& table = setting.params[static_cast<std::size_t>(c)];
    switch (setting.structure) {
      case SettingSpec::Structure::WhiteNoise: {
        std::normal_distribution<double> normal(0.0, 1.0);
        for (Index i = 0; i < n; ++i) {
          z(i, c) = std::sqrt(table[static_cast<std::size_t>(clusters.block_of[static_cast<std::size_t>(i)])].sigma2) *
                    normal(engine);
        }
        break;
      }
      case SettingSpec::Structure::ClusterMatern: {
        // Fields are independent across clusters: factorize each cluster
        // block on its own.
        const auto members = clusters.blocks();
        for (std::size_t k = 0; k < members.size(); ++k) {
          const auto& idx = members[k];
          if (idx.empty()) continue;
          const auto m = static_cast<Index>(idx.size());
          Coords sub(m, 2);
          for (Index a = 0; a < m; ++a) sub.row(a) = coords.row(idx[static_cast<std::size_t>(a)]);
          const Partition one{std::vector<int>(idx.size(), static_cast<int>(k)), clusters.num_blocks};
          const Vector draw = sample_gaussian(build_component_cov(sub, one, setting, c), engine);
          for (Index a = 0; a < m; ++a) z(idx[static_cast<std::size_t>(a)], c) = draw(a);
        }
        break;
      }
      case SettingSpec::Structure::NonstatMatern:
      case SettingSpec::Structure::StationaryMatern:
        z.col(c) = sample_gaussian(build_component_cov(coords, clusters, setting, c), engine);
        break;
    }
  }

  SpatialData out;
  out.coords = coords;
  out.values = (z * setting.A.transpose()).rowwise() + setting.b.transpose();
  return out;
}

}  // namespace snss
