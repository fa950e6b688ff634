#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "punfold/decimate.hpp"
#include "punfold/mesh_io.hpp"
#include "punfold/metrics.hpp"
#include "punfold/pipeline.hpp"
#include "punfold/svg.hpp"

using nlohmann::ordered_json;
namespace fs = std::filesystem;
using namespace punfold;

namespace {

constexpr int kExitInvalidInput = 3;

CollapseStrategy strategy_from_name(const std::string& name) {
  if (name == "q/q") return kStrategyQQ;
  if (name == "se/mp") return kStrategySEMP;
  if (name == "se/q") return kStrategySEQ;
  throw MeshError("unknown strategy: " + name);
}

int exit_code_of(UnfoldStatus status) {
  switch (status) {
    case UnfoldStatus::Success:
      return 0;
    case UnfoldStatus::Approximative:
      return 1;
    case UnfoldStatus::Failed:
      return 2;
  }
  return 2;
}

ordered_json metrics_json(const MetricsReport& m) {
  ordered_json j;
  j["coverage_percent"] = m.coverage_percent;
  j["aspect_ratio"] = m.aspect_ratio;
  if (m.hausdorff_percent) j["hausdorff_percent"] = *m.hausdorff_percent;
  j["wall_seconds"] = m.wall_seconds;
  return j;
}

void emit_report(const ordered_json& j, const std::string& path) {
  std::cout << j.dump(2) << "\n";
  if (!path.empty()) {
    std::ofstream out(path);
    if (!out) throw MeshError("cannot write report: " + path);
    out << j.dump(2) << "\n";
  }
}

struct UnfoldOptions {
  std::string input;
  std::string strategy = "q/q";
  bool direct = false;
  int target_faces = 0;
  std::uint64_t seed = 0;
  double budget_factor = 100.0;
  double step_budget = 20.0;
  bool allow_boundary = false;
  std::string svg_path;
  std::string obj_path;
  std::string report_path;
  std::string trace_path;
  double scale = 10.0;
};

int run_unfold(const UnfoldOptions& opt) {
  HalfEdgeMesh mesh = load_mesh_file(opt.input);
  const int faces_input = mesh.face_count();

  PipelineConfig config;
  config.target_faces = opt.target_faces;
  config.initial_budget_factor = opt.budget_factor;
  config.step_budget_factor = opt.step_budget;
  config.allow_boundary = opt.allow_boundary;
  std::ofstream trace_out;
  if (!opt.trace_path.empty()) {
    trace_out.open(opt.trace_path);
    if (!trace_out) throw MeshError("cannot write trace: " + opt.trace_path);
    config.trace = &trace_out;
  }

  Rng rng(opt.seed);
  UnfoldOutcome outcome =
      opt.direct ? direct_unfold(mesh, config, rng)
                 : progressive_unfold(mesh, strategy_from_name(opt.strategy),
                                      config, rng);

  if (!opt.svg_path.empty() && outcome.status != UnfoldStatus::Failed) {
    std::ofstream out(opt.svg_path);
    if (!out) throw MeshError("cannot write SVG: " + opt.svg_path);
    write_svg(out, outcome.mesh, outcome.tree, outcome.layout, opt.scale);
  }
  if (!opt.obj_path.empty()) save_obj_file(outcome.mesh, opt.obj_path);

  ordered_json j;
  j["schema"] = 1;
  j["command"] = "unfold";
  j["input"] = fs::path(opt.input).filename().string();
  j["strategy"] = opt.direct ? "direct" : opt.strategy;
  j["direct"] = opt.direct;
  j["seed"] = opt.seed;
  j["status"] = to_string(outcome.status);
  j["faces_input"] = faces_input;
  j["faces_output"] = outcome.mesh.face_count();
  j["remaining_uncollapses"] = outcome.remaining_uncollapses;
  j["metrics"] = metrics_json(outcome.metrics);
  emit_report(j, opt.report_path);
  return exit_code_of(outcome.status);
}

struct DecimateOptions {
  std::string input;
  std::string strategy = "q/q";
  int target = 0;
  std::uint64_t seed = 0;
  std::string obj_path;
  std::string records_path;
  std::string report_path;
};

int run_decimate(const DecimateOptions& opt) {
  HalfEdgeMesh mesh = load_mesh_file(opt.input);
  const int faces_input = mesh.face_count();
  const MeshValidationReport report = mesh.validate();
  const int genus = report.genus_known ? report.genus : 0;
  const int target =
      opt.target > 0 ? opt.target : target_face_count(faces_input, genus);

  Rng rng(Rng::mix(opt.seed, rng_stream::kDecimate));
  std::vector<CollapseRecord> records =
      decimate_to(mesh, target, strategy_from_name(opt.strategy), rng);

  if (!opt.obj_path.empty()) save_obj_file(mesh, opt.obj_path);
  if (!opt.records_path.empty()) {
    std::ofstream out(opt.records_path, std::ios::binary);
    if (!out) throw MeshError("cannot write records: " + opt.records_path);
    save_records(out, records);
  }

  ordered_json j;
  j["schema"] = 1;
  j["command"] = "decimate";
  j["input"] = fs::path(opt.input).filename().string();
  j["strategy"] = opt.strategy;
  j["seed"] = opt.seed;
  j["target_faces"] = target;
  j["faces_input"] = faces_input;
  j["faces_output"] = mesh.face_count();
  j["collapses"] = records.size();
  emit_report(j, opt.report_path);
  return 0;
}

struct MetricsOptions {
  std::string input;
  std::string compare;
  double density = 10.0;
  std::string report_path;
};

int run_metrics(const MetricsOptions& opt) {
  HalfEdgeMesh mesh = load_mesh_file(opt.input);
  const MeshValidationReport v = mesh.validate();

  ordered_json j;
  j["schema"] = 1;
  j["command"] = "metrics";
  j["input"] = fs::path(opt.input).filename().string();
  j["vertices"] = mesh.vertex_count();
  j["edges"] = mesh.edge_count();
  j["faces"] = mesh.face_count();
  j["boundary_edges"] = mesh.boundary_edge_count();
  j["manifold"] = v.is_manifold;
  j["orientable"] = v.is_orientable;
  j["triangular"] = v.is_triangular;
  j["components"] = v.component_count;
  if (v.genus_known) j["genus"] = v.genus;
  j["average_dual_valence"] = mesh.average_dual_valence();
  j["bbox_diagonal"] = mesh.bbox_diagonal();
  if (!opt.compare.empty()) {
    HalfEdgeMesh other = load_mesh_file(opt.compare);
    j["compare"] = fs::path(opt.compare).filename().string();
    j["hausdorff_percent"] = hausdorff_relative(mesh, other, opt.density);
  }
  emit_report(j, opt.report_path);
  return 0;
}

struct BenchOptions {
  std::string corpus;
  std::vector<int> resolutions = {2000};
  std::uint64_t seed = 0;
  int jobs = 0;
  double budget_factor = 100.0;
  double step_budget = 20.0;
  std::string report_path;
  std::string csv_path;
};

struct BenchRow {
  std::string mesh_name;
  int resolution = 0;
  std::string variant;
  int prepared_index = -1;  // index into the prepared-mesh table
  std::uint64_t seed = 0;
};

struct BenchResult {
  std::string status = "error";
  std::string message;
  double seconds = 0.0;
  double coverage = 0.0;
  double aspect = 0.0;
  std::optional<double> hausdorff;
  int remaining = 0;
};

BenchResult run_bench_row(const BenchRow& row, const HalfEdgeMesh& mesh,
                          const BenchOptions& opt) {
  BenchResult res;
  try {
    PipelineConfig config;
    config.initial_budget_factor = opt.budget_factor;
    config.step_budget_factor = opt.step_budget;
    Rng rng(row.seed);
    UnfoldOutcome outcome =
        row.variant == "direct"
            ? direct_unfold(mesh, config, rng)
            : progressive_unfold(mesh, strategy_from_name(row.variant), config,
                                 rng);
    res.status = to_string(outcome.status);
    res.seconds = outcome.metrics.wall_seconds;
    res.coverage = outcome.metrics.coverage_percent;
    res.aspect = outcome.metrics.aspect_ratio;
    res.hausdorff = outcome.metrics.hausdorff_percent;
    res.remaining = outcome.remaining_uncollapses;
  } catch (const std::exception& e) {
    res.status = "error";
    res.message = e.what();
  }
  return res;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int run_bench(const BenchOptions& opt) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(opt.corpus)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    if (ext == ".obj" || ext == ".off" || ext == ".stl")
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  const std::vector<std::string> variants = {"q/q", "se/mp", "se/q", "direct"};

  // One prepared mesh per (file, resolution): the original brought down to
  // the requested face count by quadric decimation. Rows then share it
  // read-only across the pool.
  std::vector<HalfEdgeMesh> prepared;
  std::vector<BenchRow> rows;
  std::vector<BenchResult> prep_errors;  // parallel to error rows
  for (const fs::path& file : files) {
    for (int resolution : opt.resolutions) {
      int prepared_index = -1;
      std::string prep_error;
      try {
        HalfEdgeMesh mesh = load_mesh_file(file.string());
        Rng prep_rng(Rng::mix(opt.seed, 0x70726570ull));
        decimate_to(mesh, resolution, kStrategyQQ, prep_rng);
        prepared_index = static_cast<int>(prepared.size());
        prepared.push_back(std::move(mesh));
      } catch (const std::exception& e) {
        prep_error = e.what();
      }
      for (const std::string& variant : variants) {
        BenchRow row;
        row.mesh_name = file.filename().string();
        row.resolution = resolution;
        row.variant = variant;
        row.prepared_index = prepared_index;
        row.seed = Rng::mix(opt.seed, rows.size());
        rows.push_back(row);
        if (prepared_index < 0) {
          BenchResult res;
          res.status = "error";
          res.message = prep_error;
          prep_errors.push_back(res);
        }
      }
    }
  }

  std::vector<BenchResult> results(rows.size());
  std::atomic<std::size_t> next{0};
  const unsigned jobs =
      opt.jobs > 0 ? static_cast<unsigned>(opt.jobs)
                   : std::max(1u, std::thread::hardware_concurrency());
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= rows.size()) return;
      if (rows[i].prepared_index < 0) continue;  // filled from prep_errors
      results[i] = run_bench_row(rows[i], prepared[rows[i].prepared_index],
                                 opt);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  {
    std::size_t k = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (rows[i].prepared_index < 0) results[i] = prep_errors[k++];
  }

  ordered_json j;
  j["schema"] = 1;
  j["command"] = "bench";
  j["corpus"] = opt.corpus;
  j["seed"] = opt.seed;
  j["resolutions"] = opt.resolutions;
  j["rows"] = ordered_json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ordered_json r;
    r["mesh"] = rows[i].mesh_name;
    r["resolution"] = rows[i].resolution;
    r["variant"] = rows[i].variant;
    r["status"] = results[i].status;
    if (!results[i].message.empty()) r["message"] = results[i].message;
    r["seconds"] = results[i].seconds;
    r["coverage_percent"] = results[i].coverage;
    r["aspect_ratio"] = results[i].aspect;
    if (results[i].hausdorff) r["hausdorff_percent"] = *results[i].hausdorff;
    r["remaining_uncollapses"] = results[i].remaining;
    j["rows"].push_back(r);
  }
  ordered_json agg;
  for (const std::string& variant : variants) {
    int runs = 0, success = 0, approx = 0, failed = 0, errors = 0;
    std::vector<double> seconds;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].variant != variant) continue;
      ++runs;
      const std::string& s = results[i].status;
      if (s == "success") ++success;
      else if (s == "approximative") ++approx;
      else if (s == "failed") ++failed;
      else ++errors;
      if (s == "success" || s == "approximative") seconds.push_back(results[i].seconds);
    }
    ordered_json a;
    a["runs"] = runs;
    a["success"] = success;
    a["approximative"] = approx;
    a["failed"] = failed;
    a["errors"] = errors;
    a["success_rate"] = runs ? static_cast<double>(success) / runs : 0.0;
    a["success_with_approx_rate"] =
        runs ? static_cast<double>(success + approx) / runs : 0.0;
    a["median_seconds"] = median_of(seconds);
    a["mean_seconds"] =
        seconds.empty() ? 0.0
                        : std::accumulate(seconds.begin(), seconds.end(), 0.0) /
                              static_cast<double>(seconds.size());
    agg[variant] = a;
  }
  j["aggregates"] = agg;

  if (!opt.csv_path.empty()) {
    std::ofstream csv(opt.csv_path);
    if (!csv) throw MeshError("cannot write CSV: " + opt.csv_path);
    csv << "mesh,resolution,variant,status,seconds,coverage_percent,"
           "aspect_ratio,hausdorff_percent,remaining_uncollapses\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      csv << rows[i].mesh_name << "," << rows[i].resolution << ","
          << rows[i].variant << "," << results[i].status << ","
          << results[i].seconds << "," << results[i].coverage << ","
          << results[i].aspect << ",";
      if (results[i].hausdorff) csv << *results[i].hausdorff;
      csv << "," << results[i].remaining << "\n";
    }
  }
  emit_report(j, opt.report_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"punfold: unfold triangle meshes into printable nets"};
  app.require_subcommand(1);

  const std::vector<std::string> strategy_names = {"q/q", "se/mp", "se/q"};

  UnfoldOptions uopt;
  CLI::App* unfold = app.add_subcommand(
      "unfold", "Unfold a mesh into a single overlap-free net");
  unfold->add_option("input", uopt.input, "Input mesh (.obj/.off/.stl)")
      ->required();
  unfold->add_option("--strategy", uopt.strategy, "Collapse strategy")
      ->check(CLI::IsMember(strategy_names));
  unfold->add_flag("--direct", uopt.direct,
                   "Skip decimation; solve at full resolution");
  unfold->add_option("--target-faces", uopt.target_faces,
                     "Decimation target (0 = formula)");
  unfold->add_option("--seed", uopt.seed, "Random seed");
  unfold->add_option("--budget-factor", uopt.budget_factor,
                     "Initial solver budget per face");
  unfold->add_option("--step-budget", uopt.step_budget,
                     "Per-uncollapse solver budget per face");
  unfold->add_flag("--allow-boundary", uopt.allow_boundary,
                   "Accept meshes with boundary");
  unfold->add_option("--svg", uopt.svg_path, "Write the net as SVG");
  unfold->add_option("--obj-out", uopt.obj_path, "Write the final mesh");
  unfold->add_option("--report", uopt.report_path, "Write the JSON report");
  unfold->add_option("--trace", uopt.trace_path, "Write a solver trace log");
  unfold->add_option("--scale", uopt.scale, "SVG millimeters per model unit");

  DecimateOptions dopt;
  CLI::App* decimate =
      app.add_subcommand("decimate", "Collapse a mesh to a face budget");
  decimate->add_option("input", dopt.input, "Input mesh")->required();
  decimate->add_option("--strategy", dopt.strategy, "Collapse strategy")
      ->check(CLI::IsMember(strategy_names));
  decimate->add_option("--target", dopt.target,
                       "Target face count (0 = formula)");
  decimate->add_option("--seed", dopt.seed, "Random seed");
  decimate->add_option("--obj-out", dopt.obj_path, "Write the decimated mesh");
  decimate->add_option("--records", dopt.records_path,
                       "Write the collapse-record stack");
  decimate->add_option("--report", dopt.report_path, "Write the JSON report");

  MetricsOptions mopt;
  CLI::App* metrics =
      app.add_subcommand("metrics", "Inspect a mesh, optionally compare two");
  metrics->add_option("input", mopt.input, "Input mesh")->required();
  metrics->add_option("--compare", mopt.compare,
                      "Second mesh for Hausdorff distance");
  metrics->add_option("--density", mopt.density,
                      "Hausdorff samples per average-triangle area");
  metrics->add_option("--report", mopt.report_path, "Write the JSON report");

  BenchOptions bopt;
  CLI::App* bench =
      app.add_subcommand("bench", "Batch-run all variants over a corpus");
  bench->add_option("corpus", bopt.corpus, "Directory of meshes")->required();
  bench->add_option("--resolutions", bopt.resolutions,
                    "Face counts to prepare each mesh at")
      ->delimiter(',');
  bench->add_option("--seed", bopt.seed, "Master seed");
  bench->add_option("--jobs", bopt.jobs, "Worker threads (0 = hardware)");
  bench->add_option("--budget-factor", bopt.budget_factor,
                    "Initial solver budget per face");
  bench->add_option("--step-budget", bopt.step_budget,
                    "Per-uncollapse solver budget per face");
  bench->add_option("--report", bopt.report_path, "Write the JSON report");
  bench->add_option("--csv", bopt.csv_path, "Write per-run rows as CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(unfold)) return run_unfold(uopt);
    if (app.got_subcommand(decimate)) return run_decimate(dopt);
    if (app.got_subcommand(metrics)) return run_metrics(mopt);
    if (app.got_subcommand(bench)) return run_bench(bopt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }
  return kExitInvalidInput;
}
