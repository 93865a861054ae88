#include "snss/estimators.hpp"

#include <string>

#include "snss/loccov.hpp"

namespace snss {
namespace {

/// Whitened data, shared by jd, sjd and sbss.
struct Standardized {
  Vector mean;
  Matrix root;
  SpatialData data;
};

Standardized standardize(const SpatialData& data) {
  Standardized st;
  st.mean = sample_mean(data.values);
  const Matrix cov = local_cov(data, KernelSpec::f0());
  const Whitener white(cov);
  st.root = white.root();
  st.data.coords = data.coords;
  st.data.values = white.apply(data.values, st.mean);
  return st;
}

UnmixingModel joint_model(Method method, const SpatialData& data, const Partition& partition,
                          std::span<const KernelSpec> kernels, const JointDiagOptions& options) {
  data.validate();
  if (kernels.empty()) throw ConfigError(to_string(method) + " needs at least one kernel");
  if (static_cast<Index>(partition.block_of.size()) != data.n()) {
    throw DataError("partition size does not match the number of locations");
  }
  require_block_sizes(partition, method == Method::JD ? data.p() : 1);

  Standardized st = standardize(data);
  // Standardized data already has zero mean.
  const Vector zero = Vector::Zero(data.p());
  std::vector<Matrix> mats;
  const auto blocks = partition.blocks();
  mats.reserve(blocks.size() * kernels.size());
  for (const auto& block : blocks) {
    for (const auto& kernel : kernels) mats.push_back(local_cov(st.data, block, kernel, zero));
  }

  const JointDiagResult jd = givens_joint_diag(mats, options);
  UnmixingModel model;
  model.method = method;
  model.T = st.mean;
  model.W = jd.U * st.root;
  model.diagnostics.converged = jd.converged;
  model.diagnostics.sweeps = jd.sweeps;
  model.diagnostics.criterion = jd.criterion;
  for (const auto& m : mats) model.diagnostics.diagonals.push_back((jd.U * m * jd.U.transpose()).diagonal());
  return model;
}

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::SD:
      return "sd";
    case Method::JD:
      return "jd";
    case Method::SJD:
      return "sjd";
    case Method::SBSS:
      return "sbss";
    case Method::FOBI:
      return "fobi";
  }
  return {};
}

Method parse_method(std::string_view text) {
  if (text == "sd") return Method::SD;
  if (text == "jd") return Method::JD;
  if (text == "sjd") return Method::SJD;
  if (text == "sbss") return Method::SBSS;
  if (text == "fobi") return Method::FOBI;
  throw ConfigError("unknown method '" + std::string(text) + "' (expected sd, jd, sjd, sbss or fobi)");
}

UnmixingModel snss_sd(const SpatialData& data, const Partition& partition) {
  data.validate();
  if (partition.num_blocks != 2) {
    throw ConfigError("sd needs a partition with exactly two blocks, got " + std::to_string(partition.num_blocks));
  }
  if (static_cast<Index>(partition.block_of.size()) != data.n()) {
    throw DataError("partition size does not match the number of locations");
  }
  require_block_sizes(partition, data.p());

  const Vector mean = sample_mean(data.values);
  const auto blocks = partition.blocks();
  const Matrix m1 = local_cov(data, blocks[0], KernelSpec::f0(), mean);
  const Matrix m2 = local_cov(data, blocks[1], KernelSpec::f0(), mean);

  SimDiagResult sd;
  try {
    sd = simultaneous_diag(m1, m2);
  } catch (const NumericError& e) {
    throw NumericError(std::string("block 1: ") + e.what());
  }
  UnmixingModel model;
  model.method = Method::SD;
  model.T = mean;
  model.W = std::move(sd.W);
  model.diagnostics.diagonals.push_back(std::move(sd.D));
  return model;
}

UnmixingModel snss_jd(const SpatialData& data, const Partition& partition, const JointDiagOptions& options) {
  const KernelSpec f0[] = {KernelSpec::f0()};
  return joint_model(Method::JD, data, partition, f0, options);
}

UnmixingModel snss_sjd(const SpatialData& data, const Partition& partition, std::span<const KernelSpec> kernels,
                       const JointDiagOptions& options) {
  return joint_model(Method::SJD, data, partition, kernels, options);
}

UnmixingModel sbss(const SpatialData& data, std::span<const KernelSpec> kernels, const JointDiagOptions& options) {
  return joint_model(Method::SBSS, data, Partition::whole(data.n()), kernels, options);
}

UnmixingModel fobi(const SpatialData& data) {
  data.validate();
  const Standardized st = standardize(data);
  const Matrix& y = st.data.values;
  const Vector norms = y.rowwise().squaredNorm();
  Matrix kurt = y.transpose() * norms.asDiagonal() * y / static_cast<double>(data.n());
  kurt = 0.5 * (kurt + kurt.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(kurt);
  if (eig.info() != Eigen::Success) throw NumericError("fourth-moment eigendecomposition failed");

  Matrix u = eig.eigenvectors().rowwise().reverse().transpose();
  fix_row_signs(u);
  UnmixingModel model;
  model.method = Method::FOBI;
  model.T = st.mean;
  model.W = u * st.root;
  model.diagnostics.diagonals.push_back(eig.eigenvalues().reverse());
  return model;
}

Matrix latent_scores(const UnmixingModel& model, const Matrix& values) {
  if (values.cols() != model.W.cols() || model.T.size() != values.cols()) {
    throw DataError("latent scores: data has " + std::to_string(values.cols()) + " columns, model expects " +
                    std::to_string(model.W.cols()));
  }
  return (values.rowwise() - model.T.transpose()) * model.W.transpose();
}

}  // namespace snss
