#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "snss/config.hpp"
#include "snss/estimators.hpp"
#include "snss/geometry.hpp"

namespace snss {

/// One estimator configuration of the simulation study, written as
/// `method[/partition[/kernels]]`, e.g. `sd/halve-x`, `jd/grid:2x2`,
/// `sjd/grid:2x2/f0+ball:2`, `sbss//ring:0:2`, `fobi`.
struct MethodSpec {
  Method method = Method::FOBI;
  PartitionSpec partition;
  std::vector<KernelSpec> kernels;

  static MethodSpec parse(std::string_view text);
  std::string to_string() const;

  /// Fits the estimator; `domain` is the rectangle the partition divides.
  UnmixingModel fit(const SpatialData& data, const Rect& domain, const JointDiagOptions& options = {}) const;
};

/// Default estimator set: sd halving x and y, jd and
/// sjd on a 2x2 grid (sjd with f0 plus ball:2 or ring:0:2), sbss with
/// ball:2 or ring:0:2, and fobi.
std::vector<MethodSpec> default_study_methods();

enum class Pattern { Uniform, Skewed };
std::string to_string(Pattern pattern);
Pattern parse_pattern(std::string_view text);

enum class Mixing { Identity, Random };

struct StudyConfig {
  std::vector<int> settings{1, 2, 3, 4, 5, 6};
  std::vector<Pattern> patterns{Pattern::Uniform, Pattern::Skewed};
  std::vector<int> n_sides{20, 30, 40};
  std::vector<MethodSpec> methods = default_study_methods();
  int reps = 100;
  std::uint64_t seed = 1;
  int threads = 1;
  Mixing mixing = Mixing::Identity;
  JointDiagOptions jd_options;

  /// Recognized keys: settings, patterns, n_sides, methods (separated by
  /// ','), reps, seed, threads, mixing (identity|random), jd_tol,
  /// jd_max_sweeps. Unknown keys are rejected.
  static StudyConfig from_config(const KeyValueConfig& cfg);
  /// Fully resolved configuration, including defaults. `threads` is left
  /// out since it does not influence results.
  KeyValueConfig to_config() const;
  void validate() const;
};

struct ReplicateRow {
  int setting = 0;
  Pattern pattern = Pattern::Uniform;
  int n_side = 0;
  int method_index = 0;  // position in StudyConfig::methods
  int rep = 0;
  std::uint64_t seed = 0;
  std::optional<double> mdi;
  bool converged = false;
  std::string failure;  // empty on success
};

struct AggregateRow {
  int setting = 0;
  Pattern pattern = Pattern::Uniform;
  int n_side = 0;
  int method_index = 0;
  int reps = 0;
  int n_ok = 0;
  std::optional<double> mean_mdi;
};

/// Seed of one replicate, shared by every method evaluated on it.
std::uint64_t replicate_seed(std::uint64_t base, int setting, Pattern pattern, int n_side, int rep);

/// Simulated data of one replicate plus the true mixing matrix.
struct ReplicateData {
  SpatialData data;
  Partition clusters;
  Matrix A;
};

ReplicateData simulate_replicate(const StudyConfig& config, int setting, Pattern pattern, int n_side,
                                 std::uint64_t seed);

/// Runs every (setting, pattern, n_side, replicate) on `config.threads`
/// worker threads. Estimator failures become rows without MDI. Rows are
/// returned sorted by (setting, pattern, n_side, method, rep), independent
/// of scheduling. The callback, when given, receives the number of
/// finished replicates.
std::vector<ReplicateRow> run_study(const StudyConfig& config,
                                    const std::function<void(int done, int total)>& progress = {});

/// Mean MDI per (setting, pattern, n_side, method) over successful rows,
/// summed in replicate order.
std::vector<AggregateRow> aggregate(const std::vector<ReplicateRow>& rows);

std::string replicates_csv(const StudyConfig& config, const std::vector<ReplicateRow>& rows);
std::string aggregate_csv(const StudyConfig& config, const std::vector<AggregateRow>& rows);

}  // namespace snss
