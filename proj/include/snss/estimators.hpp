#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "snss/geometry.hpp"
#include "snss/jointdiag.hpp"
#include "snss/types.hpp"

namespace snss {

enum class Method { SD, JD, SJD, SBSS, FOBI };

std::string to_string(Method method);
/// Accepts `sd`, `jd`, `sjd`, `sbss`, `fobi`.
Method parse_method(std::string_view text);

struct Diagnostics {
  /// diag(W M W^T) for every matrix the estimator diagonalized, in
  /// block-major order (block k, kernel l) for jd/sjd/sbss; the
  /// generalized eigenvalues for sd; FOBI eigenvalues for fobi.
  std::vector<Vector> diagonals;
  bool converged = true;
  int sweeps = 0;
  double criterion = 0.0;
};

/// Fitted unmixing matrix W and location T; latent scores are
/// (x - T) W^T row-wise.
struct UnmixingModel {
  Matrix W;
  Vector T;
  Method method = Method::SD;
  Diagnostics diagnostics;
};

/// Simultaneous diagonalization of the two block covariance matrices.
/// The partition must have exactly two blocks with at least p points each.
UnmixingModel snss_sd(const SpatialData& data, const Partition& partition);

/// Joint diagonalization of the whitened per-block covariance matrices.
UnmixingModel snss_jd(const SpatialData& data, const Partition& partition,
                      const JointDiagOptions& options = {});

/// Joint diagonalization of the whitened local covariance matrices for
/// every (block, kernel) pair.
UnmixingModel snss_sjd(const SpatialData& data, const Partition& partition,
                       std::span<const KernelSpec> kernels, const JointDiagOptions& options = {});

/// Stationary SBSS: snss_sjd on the undivided domain.
UnmixingModel sbss(const SpatialData& data, std::span<const KernelSpec> kernels,
                   const JointDiagOptions& options = {});

/// Fourth order blind identification.
UnmixingModel fobi(const SpatialData& data);

/// Row-wise (x - T) W^T.
Matrix latent_scores(const UnmixingModel& model, const Matrix& values);
inline Matrix latent_scores(const UnmixingModel& model, const SpatialData& data) {
  return latent_scores(model, data.values);
}

}  // namespace snss
