#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "snss/coda.hpp"
#include "snss/config.hpp"
#include "snss/csv.hpp"
#include "snss/fields.hpp"
#include "snss/rng.hpp"
#include "snss/study.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace snss;

namespace {

enum ExitCode { kOk = 0, kOther = 1, kConfig = 2, kData = 3, kNumeric = 4 };

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory " + dir.string() + ": " + ec.message());
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

std::string table_csv(const std::vector<std::string>& header, const Matrix& data) {
  std::string out;
  for (std::size_t c = 0; c < header.size(); ++c) out += (c ? "," : "") + header[c];
  out += "\n";
  for (Index i = 0; i < data.rows(); ++i) {
    for (Index j = 0; j < data.cols(); ++j) out += (j ? "," : "") + format_real(data(i, j));
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string config;
  int reps = 0;
  int threads = 0;
  std::string out = ".";
  std::vector<std::string> overrides;
  bool quiet = false;
};

int run_simulate(const SimulateArgs& a) {
  KeyValueConfig cfg = KeyValueConfig::load(a.config);
  for (const auto& o : a.overrides) cfg.apply_override(o);
  if (a.reps > 0) cfg.set("reps", std::to_string(a.reps));
  if (a.threads > 0) cfg.set("threads", std::to_string(a.threads));
  const StudyConfig study = StudyConfig::from_config(cfg);

  const fs::path out(a.out);
  ensure_dir(out);
  write_text(out / "config.txt", study.to_config().dump());

  const auto rows = run_study(study, [&](int done, int total) {
    if (!a.quiet && (done == total || done % 50 == 0)) std::cerr << "\rreplicates " << done << "/" << total << std::flush;
  });
  if (!a.quiet) std::cerr << "\n";

  std::string log;
  int failures = 0;
  for (const auto& r : rows) {
    if (r.failure.empty()) continue;
    ++failures;
    log += "setting=" + std::to_string(r.setting) + " pattern=" + to_string(r.pattern) +
           " n_side=" + std::to_string(r.n_side) + " method=" +
           study.methods[static_cast<std::size_t>(r.method_index)].to_string() + " rep=" + std::to_string(r.rep) +
           ": " + r.failure + "\n";
  }
  write_text(out / "replicates.csv", replicates_csv(study, rows));
  write_text(out / "aggregate.csv", aggregate_csv(study, aggregate(rows)));
  write_text(out / "failures.log", log);
  if (failures > 0) std::cerr << failures << " estimator failures, see " << (out / "failures.log").string() << "\n";
  return kOk;
}

// ---------------------------------------------------------------- estimate

struct EstimateArgs {
  std::string in;
  std::string method;
  std::string partition = "none";
  std::vector<std::string> kernels;
  bool coda = false;
  std::string out = ".";
  double jd_tol = JointDiagOptions{}.tol;
  int jd_max_sweeps = JointDiagOptions{}.max_sweeps;
};

int run_estimate(const EstimateArgs& a) {
  std::string kernel_list;
  for (const auto& k : a.kernels) kernel_list += (kernel_list.empty() ? "" : "+") + k;
  const std::string partition = a.partition == "none" ? std::string() : a.partition;
  const MethodSpec spec = MethodSpec::parse(a.method + "/" + partition + "/" + kernel_list);
  JointDiagOptions options;
  options.tol = a.jd_tol;
  options.max_sweeps = a.jd_max_sweeps;
  if (!(options.tol > 0.0) || options.max_sweeps < 1) throw ConfigError("invalid joint diagonalization options");

  std::vector<std::string> names;
  SpatialData data = read_spatial_csv(a.in, &names);
  Matrix V;
  if (a.coda) {
    IlrResult ilr = ilr_pivot(data.values);
    data.values = std::move(ilr.coords);
    V = std::move(ilr.V);
  }
  data.validate();

  const Rect domain = Rect::bounding_box(data.coords);
  const UnmixingModel model = spec.fit(data, domain, options);
  const Matrix z = latent_scores(model, data);

  const fs::path out(a.out);
  ensure_dir(out);

  KeyValueConfig echo;
  echo.set("in", a.in);
  echo.set("method", to_string(spec.method));
  echo.set("partition", spec.partition.to_string());
  echo.set("kernels", to_string(spec.kernels));
  echo.set("coda", a.coda ? "true" : "false");
  echo.set("jd_tol", format_real(options.tol));
  echo.set("jd_max_sweeps", std::to_string(options.max_sweeps));
  write_text(out / "config.txt", echo.dump());

  std::vector<std::string> header{"x", "y"};
  for (Index c = 0; c < z.cols(); ++c) header.push_back("z" + std::to_string(c + 1));
  Matrix latent(z.rows(), z.cols() + 2);
  latent << data.coords, z;
  write_text(out / "latent.csv", table_csv(header, latent));

  if (a.coda) write_text(out / "loadings.csv", table_csv(names, combined_loadings(model.W, V)));

  json diag;
  diag["converged"] = model.diagnostics.converged;
  diag["sweeps"] = model.diagnostics.sweeps;
  diag["criterion"] = model.diagnostics.criterion;
  diag["diagonals"] = json::array();
  for (const auto& d : model.diagnostics.diagonals) diag["diagonals"].push_back(vector_json(d));

  json meta;
  meta["method"] = spec.to_string();
  meta["config"] = echo.values();
  meta["variables"] = names;
  meta["domain"] = {domain.x0, domain.y0, domain.x1, domain.y1};
  meta["W"] = matrix_json(model.W);
  meta["T"] = vector_json(model.T);
  meta["diagnostics"] = diag;
  write_text(out / "model.json", meta.dump(2) + "\n");

  if (!model.diagnostics.converged) {
    std::cerr << "warning: joint diagonalization stopped after " << model.diagnostics.sweeps
              << " sweeps without converging\n";
  }
  return kOk;
}

// ---------------------------------------------------------------- varmap

struct VarmapArgs {
  std::string in;
  double grid_res = 1.0;
  double block = 3.0;
  std::string out = ".";
};

int run_varmap(const VarmapArgs& a) {
  std::vector<std::string> names;
  const SpatialData data = read_spatial_csv(a.in, &names);
  const fs::path out(a.out);
  ensure_dir(out);
  for (Index c = 0; c < data.p(); ++c) {
    const auto cells = moving_block_variance(data.values.col(c), data.coords, a.grid_res, a.block);
    std::string text = "cell_x,cell_y,count,variance\n";
    for (const auto& cell : cells) {
      text += format_real(cell.x) + "," + format_real(cell.y) + "," + std::to_string(cell.count) + "," +
              (cell.has_variance ? format_real(cell.variance) : std::string()) + "\n";
    }
    write_text(out / ("varmap_" + names[static_cast<std::size_t>(c)] + ".csv"), text);
  }
  return kOk;
}

// ---------------------------------------------------------------- sample

struct SampleArgs {
  int setting = 1;
  std::string pattern = "uniform";
  int n_side = 20;
  std::uint64_t seed = 1;
  std::string mixing = "identity";
  std::string out = "sample.csv";
};

int run_sample(const SampleArgs& a) {
  KeyValueConfig cfg;
  cfg.set("settings", std::to_string(a.setting));
  cfg.set("n_sides", std::to_string(a.n_side));
  cfg.set("mixing", a.mixing);
  const StudyConfig study = StudyConfig::from_config(cfg);
  const ReplicateData rep = simulate_replicate(study, a.setting, parse_pattern(a.pattern), a.n_side, a.seed);

  std::vector<std::string> header{"x", "y"};
  for (Index c = 0; c < rep.data.p(); ++c) header.push_back("x" + std::to_string(c + 1));
  Matrix table(rep.data.n(), rep.data.p() + 2);
  table << rep.data.coords, rep.data.values;
  write_text(a.out, table_csv(header, table));

  json truth;
  truth["setting"] = a.setting;
  truth["seed"] = a.seed;
  truth["A"] = matrix_json(rep.A);
  std::vector<int> cluster(rep.clusters.block_of.begin(), rep.clusters.block_of.end());
  truth["cluster"] = cluster;
  write_text(a.out + ".truth.json", truth.dump(2) + "\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial non-stationary blind source separation"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run the Monte-Carlo study described by a config file");
  simulate->add_option("--config", sim.config, "key = value config file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--reps", sim.reps, "replicates per cell (overrides config)");
  simulate->add_option("--threads", sim.threads, "worker threads (overrides config)");
  simulate->add_option("--out", sim.out, "output directory");
  simulate->add_option("--set", sim.overrides, "config override key=value (repeatable)");
  simulate->add_flag("--quiet", sim.quiet, "no progress output");

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Fit an unmixing model to a spatial CSV file");
  estimate->add_option("--in", est.in, "input CSV with header x,y,<names>")->required();
  estimate->add_option("--method", est.method, "sd|jd|sjd|sbss|fobi")->required();
  estimate->add_option("--partition", est.partition, "none|halve-x|halve-y|grid:KxK");
  estimate->add_option("--kernel", est.kernels, "f0|ball:R|ring:R1:R2|gauss:R (repeatable)");
  estimate->add_flag("--coda", est.coda, "apply the pivot ilr transform first");
  estimate->add_option("--out", est.out, "output directory");
  estimate->add_option("--jd-tol", est.jd_tol, "joint diagonalization tolerance");
  estimate->add_option("--jd-max-sweeps", est.jd_max_sweeps, "joint diagonalization sweep limit");

  VarmapArgs var;
  auto* varmap = app.add_subcommand("varmap", "Moving-block variance maps of latent scores");
  varmap->add_option("--in", var.in, "latent CSV with header x,y,<names>")->required();
  varmap->add_option("--grid-res", var.grid_res, "cell spacing");
  varmap->add_option("--block", var.block, "block edge length");
  varmap->add_option("--out", var.out, "output directory");

  SampleArgs smp;
  auto* sample = app.add_subcommand("sample", "Write one simulated data set as CSV");
  sample->add_option("--setting", smp.setting, "setting id 1..6");
  sample->add_option("--pattern", smp.pattern, "uniform|skewed");
  sample->add_option("--n-side", smp.n_side, "domain side length");
  sample->add_option("--seed", smp.seed, "replicate seed");
  sample->add_option("--mixing", smp.mixing, "identity|random");
  sample->add_option("--out", smp.out, "output CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim);
    if (estimate->parsed()) return run_estimate(est);
    if (varmap->parsed()) return run_varmap(var);
    if (sample->parsed()) return run_sample(smp);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
  return kOther;
}
