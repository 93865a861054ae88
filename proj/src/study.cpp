#include "snss/study.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>

#include "snss/csv.hpp"
#include "snss/fields.hpp"
#include "snss/metrics.hpp"
#include "snss/rng.hpp"

namespace snss {
namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

template <typename T, typename F>
std::string join_map(const std::vector<T>& items, F&& f) {
  std::vector<std::string> parts;
  for (const auto& it : items) parts.push_back(f(it));
  return join(parts, ",");
}

std::string csv_label(const MethodSpec& m) {
  return to_string(m.method) + "," + m.partition.to_string() + "," + to_string(m.kernels);
}

}  // namespace

MethodSpec MethodSpec::parse(std::string_view text) {
  const auto parts = split_list(text, '/');
  if (parts.empty() || parts.size() > 3) throw ConfigError("invalid method spec '" + std::string(text) + "'");
  MethodSpec spec;
  spec.method = parse_method(parts[0]);
  if (parts.size() > 1 && !parts[1].empty()) spec.partition = PartitionSpec::parse(parts[1]);
  if (parts.size() > 2) spec.kernels = KernelSpec::parse_list(parts[2]);

  const auto blocks = spec.partition.kx * spec.partition.ky;
  const bool partitioned = spec.partition.kind != PartitionSpec::Kind::Whole;
  switch (spec.method) {
    case Method::SD:
      if (!partitioned || blocks != 2) throw ConfigError("'" + std::string(text) + "': sd needs a two-block partition");
      if (!spec.kernels.empty()) throw ConfigError("'" + std::string(text) + "': sd takes no kernels");
      break;
    case Method::JD:
      if (!spec.kernels.empty()) throw ConfigError("'" + std::string(text) + "': jd takes no kernels");
      break;
    case Method::SJD:
      if (spec.kernels.empty()) throw ConfigError("'" + std::string(text) + "': sjd needs kernels");
      break;
    case Method::SBSS:
      if (partitioned) throw ConfigError("'" + std::string(text) + "': sbss does not partition the domain");
      if (spec.kernels.empty()) throw ConfigError("'" + std::string(text) + "': sbss needs kernels");
      break;
    case Method::FOBI:
      if (partitioned || !spec.kernels.empty()) {
        throw ConfigError("'" + std::string(text) + "': fobi takes no partition or kernels");
      }
      break;
  }
  return spec;
}

std::string MethodSpec::to_string() const {
  std::string out = snss::to_string(method);
  const bool has_partition = partition.kind != PartitionSpec::Kind::Whole;
  if (has_partition || !kernels.empty()) out += "/" + (has_partition ? partition.to_string() : std::string());
  if (!kernels.empty()) out += "/" + snss::to_string(kernels);
  return out;
}

UnmixingModel MethodSpec::fit(const SpatialData& data, const Rect& domain, const JointDiagOptions& options) const {
  switch (method) {
    case Method::SD:
      return snss_sd(data, make_partition(data.coords, partition, domain));
    case Method::JD:
      return snss_jd(data, make_partition(data.coords, partition, domain), options);
    case Method::SJD:
      return snss_sjd(data, make_partition(data.coords, partition, domain), kernels, options);
    case Method::SBSS:
      return sbss(data, kernels, options);
    case Method::FOBI:
      return fobi(data);
  }
  throw ConfigError("unknown method");
}

std::vector<MethodSpec> default_study_methods() {
  std::vector<MethodSpec> out;
  for (const char* s : {"sd/halve-x", "sd/halve-y", "jd/grid:2x2", "sjd/grid:2x2/f0+ball:2",
                        "sjd/grid:2x2/f0+ring:0:2", "sbss//ball:2", "sbss//ring:0:2", "fobi"}) {
    out.push_back(MethodSpec::parse(s));
  }
  return out;
}

std::string to_string(Pattern pattern) { return pattern == Pattern::Uniform ? "uniform" : "skewed"; }

Pattern parse_pattern(std::string_view text) {
  if (text == "uniform") return Pattern::Uniform;
  if (text == "skewed") return Pattern::Skewed;
  throw ConfigError("unknown pattern '" + std::string(text) + "' (expected uniform or skewed)");
}

StudyConfig StudyConfig::from_config(const KeyValueConfig& cfg) {
  static const std::set<std::string> known{"settings", "patterns", "n_sides", "methods", "reps", "seed",
                                           "threads",  "mixing",   "jd_tol",  "jd_max_sweeps"};
  for (const auto& [k, v] : cfg.values()) {
    if (!known.count(k)) throw ConfigError("unknown config key '" + k + "'");
  }
  StudyConfig c;
  if (auto v = cfg.get("settings")) {
    c.settings.clear();
    for (const auto& s : split_list(*v)) c.settings.push_back(parse_int(s, "settings"));
  }
  if (auto v = cfg.get("patterns")) {
    c.patterns.clear();
    for (const auto& s : split_list(*v)) c.patterns.push_back(parse_pattern(s));
  }
  if (auto v = cfg.get("n_sides")) {
    c.n_sides.clear();
    for (const auto& s : split_list(*v)) c.n_sides.push_back(parse_int(s, "n_sides"));
  }
  if (auto v = cfg.get("methods")) {
    c.methods.clear();
    for (const auto& s : split_list(*v)) c.methods.push_back(MethodSpec::parse(s));
  }
  if (auto v = cfg.get("reps")) c.reps = parse_int(*v, "reps");
  if (auto v = cfg.get("seed")) c.seed = parse_u64(*v, "seed");
  if (auto v = cfg.get("threads")) c.threads = parse_int(*v, "threads");
  if (auto v = cfg.get("mixing")) {
    if (*v == "identity") {
      c.mixing = Mixing::Identity;
    } else if (*v == "random") {
      c.mixing = Mixing::Random;
    } else {
      throw ConfigError("mixing must be identity or random");
    }
  }
  if (auto v = cfg.get("jd_tol")) c.jd_options.tol = parse_double(*v, "jd_tol");
  if (auto v = cfg.get("jd_max_sweeps")) c.jd_options.max_sweeps = parse_int(*v, "jd_max_sweeps");
  c.validate();
  return c;
}

void StudyConfig::validate() const {
  if (settings.empty() || patterns.empty() || n_sides.empty() || methods.empty()) {
    throw ConfigError("settings, patterns, n_sides and methods must be non-empty");
  }
  for (int s : settings) {
    if (s < 1 || s > 6) throw ConfigError("setting ids must be in 1..6");
  }
  for (int n : n_sides) {
    if (n < 2) throw ConfigError("n_sides entries must be at least 2");
  }
  if (reps < 1) throw ConfigError("reps must be at least 1");
  if (threads < 1) throw ConfigError("threads must be at least 1");
  if (!(jd_options.tol > 0.0) || jd_options.max_sweeps < 1) throw ConfigError("invalid joint diagonalization options");
}

KeyValueConfig StudyConfig::to_config() const {
  KeyValueConfig cfg;
  cfg.set("settings", join_map(settings, [](int s) { return std::to_string(s); }));
  cfg.set("patterns", join_map(patterns, [](Pattern p) { return snss::to_string(p); }));
  cfg.set("n_sides", join_map(n_sides, [](int s) { return std::to_string(s); }));
  cfg.set("methods", join_map(methods, [](const MethodSpec& m) { return m.to_string(); }));
  cfg.set("reps", std::to_string(reps));
  cfg.set("seed", std::to_string(seed));
  cfg.set("mixing", mixing == Mixing::Identity ? "identity" : "random");
  cfg.set("jd_tol", format_real(jd_options.tol));
  cfg.set("jd_max_sweeps", std::to_string(jd_options.max_sweeps));
  return cfg;
}

std::uint64_t replicate_seed(std::uint64_t base, int setting, Pattern pattern, int n_side, int rep) {
  return derive_seed(base, {static_cast<std::uint64_t>(setting), static_cast<std::uint64_t>(pattern),
                            static_cast<std::uint64_t>(n_side), static_cast<std::uint64_t>(rep)});
}

ReplicateData simulate_replicate(const StudyConfig& config, int setting, Pattern pattern, int n_side,
                                 std::uint64_t seed) {
  const Coords coords = pattern == Pattern::Uniform ? gen_uniform_coords(n_side, derive_seed(seed, {0}))
                                                    : gen_skewed_coords(n_side, derive_seed(seed, {0}));
  const Rect domain = Rect::square(n_side);
  Matrix centers = uniform_points(domain, kSettingClusters, derive_seed(seed, {1}));
  ReplicateData out;
  out.clusters = make_partition(coords, PartitionSpec::nearest_centers(std::move(centers)), domain);

  SettingSpec spec = SettingSpec::standard(setting);
  if (config.mixing == Mixing::Random) {
    Engine engine = make_engine(derive_seed(seed, {3}));
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Index i = 0; i < spec.A.rows(); ++i) {
      for (Index j = 0; j < spec.A.cols(); ++j) spec.A(i, j) = normal(engine);
    }
    for (Index i = 0; i < spec.b.size(); ++i) spec.b(i) = normal(engine);
  }
  out.A = spec.A;
  out.data = sample_setting(coords, out.clusters, spec, derive_seed(seed, {2}));
  return out;
}

std::vector<ReplicateRow> run_study(const StudyConfig& config, const std::function<void(int, int)>& progress) {
  config.validate();
  struct Task {
    int setting;
    Pattern pattern;
    int n_side;
    int rep;
  };
  std::vector<Task> tasks;
  for (int s : config.settings) {
    for (Pattern p : config.patterns) {
      for (int n : config.n_sides) {
        for (int r = 1; r <= config.reps; ++r) tasks.push_back({s, p, n, r});
      }
    }
  }

  const std::size_t n_methods = config.methods.size();
  std::vector<ReplicateRow> rows(tasks.size() * n_methods);
  std::atomic<std::size_t> next{0};
  std::atomic<int> done{0};
  std::mutex progress_mutex;

  auto worker = [&]() {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      const Task& task = tasks[t];
      const std::uint64_t seed = replicate_seed(config.seed, task.setting, task.pattern, task.n_side, task.rep);
      std::optional<ReplicateData> rep;
      std::string sim_failure;
      try {
        rep = simulate_replicate(config, task.setting, task.pattern, task.n_side, seed);
      } catch (const std::exception& e) {
        sim_failure = std::string("simulation: ") + e.what();
      }
      for (std::size_t m = 0; m < n_methods; ++m) {
        ReplicateRow& row = rows[t * n_methods + m];
        row.setting = task.setting;
        row.pattern = task.pattern;
        row.n_side = task.n_side;
        row.method_index = static_cast<int>(m);
        row.rep = task.rep;
        row.seed = seed;
        if (!rep) {
          row.failure = sim_failure;
          continue;
        }
        try {
          const UnmixingModel model =
              config.methods[m].fit(rep->data, Rect::square(task.n_side), config.jd_options);
          row.mdi = mdi(model.W * rep->A);
          row.converged = model.diagnostics.converged;
        } catch (const std::exception& e) {
          row.failure = e.what();
        }
      }
      const int finished = ++done;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(finished, static_cast<int>(tasks.size()));
      }
    }
  };

  const int n_threads = std::max(1, std::min<int>(config.threads, static_cast<int>(tasks.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }

  auto key = [&](const ReplicateRow& r) {
    return std::make_tuple(r.setting, static_cast<int>(r.pattern), r.n_side, r.method_index, r.rep);
  };
  std::sort(rows.begin(), rows.end(), [&](const ReplicateRow& a, const ReplicateRow& b) { return key(a) < key(b); });
  return rows;
}

std::vector<AggregateRow> aggregate(const std::vector<ReplicateRow>& rows) {
  std::vector<AggregateRow> out;
  double sum = 0.0;
  for (const auto& r : rows) {
    const bool same = !out.empty() && out.back().setting == r.setting && out.back().pattern == r.pattern &&
                      out.back().n_side == r.n_side && out.back().method_index == r.method_index;
    if (!same) {
      if (!out.empty() && out.back().n_ok > 0) out.back().mean_mdi = sum / out.back().n_ok;
      out.push_back({r.setting, r.pattern, r.n_side, r.method_index, 0, 0, std::nullopt});
      sum = 0.0;
    }
    ++out.back().reps;
    if (r.mdi) {
      ++out.back().n_ok;
      sum += *r.mdi;
    }
  }
  if (!out.empty() && out.back().n_ok > 0) out.back().mean_mdi = sum / out.back().n_ok;
  return out;
}

std::string replicates_csv(const StudyConfig& config, const std::vector<ReplicateRow>& rows) {
  std::string out = "setting,pattern,n_side,method,partition,kernels,rep,seed,mdi,converged\n";
  for (const auto& r : rows) {
    out += std::to_string(r.setting) + "," + to_string(r.pattern) + "," + std::to_string(r.n_side) + "," +
           csv_label(config.methods[static_cast<std::size_t>(r.method_index)]) + "," + std::to_string(r.rep) + "," +
           std::to_string(r.seed) + "," + (r.mdi ? format_real(*r.mdi) : std::string()) + "," +
           (r.converged ? "true" : "false") + "\n";
  }
  return out;
}

std::string aggregate_csv(const StudyConfig& config, const std::vector<AggregateRow>& rows) {
  std::string out = "setting,pattern,n_side,method,partition,kernels,reps,n_ok,mean_mdi\n";
  for (const auto& r : rows) {
    out += std::to_string(r.setting) + "," + to_string(r.pattern) + "," + std::to_string(r.n_side) + "," +
           csv_label(config.methods[static_cast<std::size_t>(r.method_index)]) + "," + std::to_string(r.reps) + "," +
           std::to_string(r.n_ok) + "," + (r.mean_mdi ? format_real(*r.mean_mdi) : std::string()) + "\n";
  }
  return out;
}

}  // namespace snss
