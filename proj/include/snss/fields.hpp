#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "snss/geometry.hpp"
#include "snss/rng.hpp"
#include "snss/types.hpp"

namespace snss {

struct MaternParams {
  double sigma2 = 1.0;  // variance
  double nu = 0.5;      // shape
  double phi = 1.0;     // range
};

/// Stationary Matern covariance
///   sigma2 / (2^(nu-1) Gamma(nu)) (h/phi)^nu K_nu(h/phi),
/// with value sigma2 at h = 0.
double matern_cov(double h, const MaternParams& params);

/// Non-stationary Matern covariance between s (with local parameters a)
/// and s2 (with local parameters b). Lags of length zero take the
/// continuous limit, which is sigma2 when a == b.
double nonstat_matern_cov(const Point& s, const MaternParams& a, const Point& s2, const MaternParams& b);

/// Piecewise-constant parameter field: one triple per cluster.
struct ClusterParamField {
  std::vector<MaternParams> per_cluster;
};

double nonstat_matern_cov(const Point& s, int cluster_s, const Point& s2, int cluster_s2,
                          const ClusterParamField& field);

inline constexpr int kSettingComponents = 3;
inline constexpr int kSettingClusters = 3;

/// Generative description of one of the six simulation settings.
struct SettingSpec {
  enum class Structure {
    WhiteNoise,       // Setting 1: independent draws, per-cluster variances
    ClusterMatern,    // Settings 2, 3: independent stationary fields per cluster
    NonstatMatern,    // Settings 4, 5: one non-stationary field over the domain
    StationaryMatern  // Setting 6
  };

  int id = 1;
  Structure structure = Structure::WhiteNoise;
  /// params[component][cluster]; for Setting 6 all clusters share one triple,
  /// for Setting 1 only sigma2 is used.
  std::array<std::array<MaternParams, kSettingClusters>, kSettingComponents> params{};
  Matrix A = Matrix::Identity(kSettingComponents, kSettingComponents);
  Vector b = Vector::Zero(kSettingComponents);

  /// The six standard settings; throws ConfigError for ids outside 1..6.
  static SettingSpec standard(int id);
};

/// n x n covariance matrix of one latent component.
Matrix build_component_cov(const Coords& coords, const Partition& clusters, const SettingSpec& setting,
                           int component);

/// Draws the latent field (one independent Gaussian vector per component)
/// and returns x = z A^T + b. Throws NumericError if a covariance cannot be
/// factorized even after jitter.
SpatialData sample_setting(const Coords& coords, const Partition& clusters, const SettingSpec& setting,
                           std::uint64_t seed);

/// Draws a zero-mean Gaussian vector with covariance `cov`. On
/// factorization failure adds 1e-10 * trace / n to the diagonal and retries,
/// escalating tenfold, up to three times.
Vector sample_gaussian(const Matrix& cov, Engine& engine);

}  // namespace snss
