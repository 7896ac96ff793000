// Copyright 2026 The dpiov Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.h"

#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "dpiov/domain.h"
#include "dpiov/emulation/fleet.h"
#include "dpiov/emulation/pipeline.h"
#include "dpiov/emulation/wire.h"
#include "dpiov/experiment.h"
#include "dpiov/format.h"
#include "dpiov/imaging.h"
#include "dpiov/rng.h"
#include "dpiov/svg_chart.h"

extern char** environ;

namespace dpiov::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::uint64_t kShuffleStream = std::uint64_t{0x5EF} << 40;

// Subcommands that take --seed (and therefore honour DPIOV_SEED).
const std::vector<std::string> kSeeded = {"gen", "query-bench", "emulate", "noise-image"};
const std::vector<std::string> kCommands = {"gen", "query-bench", "emulate", "noise-image",
                                            "report", "node"};

bool HasFlag(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

std::string CommandOf(const std::vector<std::string>& args) {
  for (const auto& a : args) {
    if (std::find(kCommands.begin(), kCommands.end(), a) != kCommands.end()) return a;
  }
  return "dpiov";
}

std::string ScalarText(const json& v) {
  return v.is_string() ? v.get<std::string>() : v.dump();
}

void WriteFile(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

void EnsureDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw std::runtime_error("cannot create output directory " + dir.string());
  }
}

void WriteConfig(const fs::path& dir, const json& config) {
  WriteFile(dir / "run_config.json", config.dump(2) + "\n");
}

// ---------------------------------------------------------------- gen

struct GenOptions {
  std::string out;
  std::string dims = "4x8";
  std::int64_t records = 10000;
  double concentration = 1.0;
  std::uint64_t seed = 1;
};

int CmdGen(const GenOptions& o, std::ostream& out) {
  const Domain domain = Domain::Parse(o.dims);
  const Eigen::VectorXd counts =
      SyntheticCounts(domain.total_size(), {o.records, o.concentration, o.seed});

  std::vector<std::int64_t> cells;
  cells.reserve(static_cast<std::size_t>(o.records));
  for (Eigen::Index c = 0; c < counts.size(); ++c) {
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(counts[c]); ++k) cells.push_back(c);
  }
  Rng rng(StreamSeed(o.seed, kShuffleStream));
  for (std::size_t i = cells.size(); i > 1; --i) {
    std::swap(cells[i - 1], cells[rng.UniformInt(i)]);
  }

  TableSchema schema;
  std::string csv;
  for (std::size_t a = 0; a < domain.num_attributes(); ++a) {
    const auto& attr = domain.attributes()[a];
    schema.attributes.push_back({attr.name, Binning::Levels(attr.cardinality)});
    csv += (a ? "," : "") + attr.name;
  }
  csv += "\n";
  for (const auto cell : cells) {
    const auto coords = domain.Coordinates(cell);
    for (std::size_t a = 0; a < coords.size(); ++a) {
      csv += (a ? "," : "") + std::to_string(coords[a]);
    }
    csv += "\n";
  }

  const fs::path dir(o.out);
  EnsureDir(dir);
  WriteFile(dir / "table.csv", csv);
  WriteFile(dir / "schema.json", schema.ToJson().dump(2) + "\n");
  const json config = {{"command", "gen"},        {"dims", domain.Label()},
                       {"records", o.records},    {"concentration", o.concentration},
                       {"seed", o.seed}};
  WriteConfig(dir, config);
  out << json{{"table", (dir / "table.csv").string()}, {"records", cells.size()}}.dump() << "\n";
  return 0;
}

// ---------------------------------------------------------------- query-bench

struct BenchOptions {
  std::string preset;
  std::vector<std::string> mechanisms;
  std::vector<std::string> workloads;
  std::vector<double> eps;
  std::vector<std::string> dims;
  std::optional<int> trials;
  std::uint64_t seed = 1;
  bool no_noise = false;
  int threads = 0;
  int hybrid_threshold = 4;
  bool consistency = false;
  std::string data;
  std::string schema;
  std::string out = "bench";
};

ExperimentSpec BuildSpec(const BenchOptions& o) {
  ExperimentSpec spec;
  const int trials = o.trials.value_or(1000);
  if (o.preset == "relative") {
    spec = RelativePreset(trials, o.seed);
  } else if (o.preset == "absolute") {
    spec = AbsolutePreset(trials, o.seed);
  } else if (o.preset.empty()) {
    spec.mechanisms = {Strategy::kFourier, Strategy::kWavelet, Strategy::kDataCube,
                       Strategy::kHierarchical};
    spec.workloads = {std::string(kAllRangeWorkload), std::string(kOneWayMarginalWorkload)};
    spec.domains = {"4x8"};
    spec.epsilons = {0.5};
    spec.trials = trials;
    spec.base_seed = o.seed;
  } else {
    throw std::invalid_argument("unknown preset '" + o.preset + "' (expected relative or absolute)");
  }
  if (!o.mechanisms.empty()) {
    spec.mechanisms.clear();
    for (const auto& m : o.mechanisms) spec.mechanisms.push_back(ParseStrategy(m));
  }
  if (!o.workloads.empty()) spec.workloads = o.workloads;
  if (!o.eps.empty()) spec.epsilons = o.eps;
  if (!o.dims.empty()) spec.domains = o.dims;
  spec.noise_enabled = !o.no_noise;
  spec.options.wavelet.hybrid_threshold = o.hybrid_threshold;
  spec.options.hierarchical.consistency = o.consistency;
  spec.data.synthetic.seed = o.seed;
  if (!o.data.empty()) {
    if (o.schema.empty()) throw std::invalid_argument("--data requires --schema");
    const TableSchema schema = TableSchema::Load(o.schema);
    const Table table = ParseTable(fs::path(o.data), schema);
    spec.data.fixture = BuildDataVector(table, schema.ToDomain()).counts();
    spec.data.label = fs::path(o.data).filename().string();
  }
  spec.Validate();
  return spec;
}

int CmdQueryBench(const BenchOptions& o, std::ostream& out) {
  const ExperimentSpec spec = BuildSpec(o);
  const ExperimentResult result = RunExperiment(spec, o.threads);
  const auto summary = Summarize(result.rows);
  json config = spec.ToJson();
  config["command"] = "query-bench";

  const fs::path dir(o.out);
  EnsureDir(dir);
  std::ostringstream results, summary_csv, metadata;
  WriteResultsCsv(results, result.rows);
  WriteSummaryCsv(summary_csv, summary);
  WriteMetadataCsv(metadata, result.metadata);
  WriteFile(dir / "results.csv", results.str());
  WriteFile(dir / "summary.csv", summary_csv.str());
  WriteFile(dir / "metadata.csv", metadata.str());
  const std::string comparison = ComparisonReport(summary);
  WriteFile(dir / "comparison.txt", comparison);
  for (const auto& [name, svg] : ChartsFromSummary(summary, config.dump())) {
    WriteFile(dir / name, svg);
  }
  WriteConfig(dir, config);
  out << comparison;
  return 0;
}

// ---------------------------------------------------------------- emulate

struct EmulateOptions {
  std::string mode = "gdp";
  int nodes = 10;
  std::vector<double> eps_img = {1.0};
  std::optional<double> eps_txt;
  std::string net = "inproc";
  std::uint64_t seed = 1;
  FleetConfig fleet;
  TrainOptions train;
  std::string host = "127.0.0.1";
  int port = 0;
  int timeout_ms = 30000;
  std::string out;
};

struct NodeOptionsCli {
  std::string host = "127.0.0.1";
  int port = 0;
  std::uint32_t node_id = 0;
  std::string mode = "gdp";
  std::string spec;
  int timeout_ms = 30000;
};

std::string NodeExecutable() {
  if (const char* env = std::getenv("DPIOV_NODE_EXE"); env != nullptr && *env != '\0') return env;
  return fs::read_symlink("/proc/self/exe").string();
}

pid_t SpawnNode(const std::string& exe, const std::vector<std::string>& args) {
  std::vector<char*> argv;
  argv.push_back(const_cast<char*>(exe.c_str()));
  for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);
  pid_t pid = 0;
  const int rc = posix_spawn(&pid, exe.c_str(), nullptr, nullptr, argv.data(), environ);
  if (rc != 0) throw std::runtime_error("cannot start node process " + exe);
  return pid;
}

// Returns the exit status of every child (in spawn order).
std::vector<int> Reap(const std::vector<pid_t>& children) {
  std::vector<int> codes;
  for (const pid_t pid : children) {
    int status = 0;
    while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    codes.push_back(WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status));
  }
  return codes;
}

PipelineReport RunTcp(const EmulateOptions& o, SharingMode mode, const FleetConfig& fleet,
                      const PipelineConfig& pipeline) {
  const std::chrono::milliseconds timeout(o.timeout_ms);
  Aggregator aggregator(o.host, static_cast<std::uint16_t>(o.port), fleet.nodes, mode, pipeline,
                        timeout);
  const json spec = {{"fleet", fleet.ToJson()}, {"pipeline", pipeline.ToJson()}};
  const std::string exe = NodeExecutable();
  std::vector<pid_t> children;
  try {
    for (int i = 0; i < fleet.nodes; ++i) {
      children.push_back(SpawnNode(
          exe, {"node", "--host", o.host, "--port", std::to_string(aggregator.port()),
                "--node-id", std::to_string(i), "--mode", std::string(ModeName(mode)), "--spec",
                spec.dump(), "--timeout-ms", std::to_string(o.timeout_ms)}));
    }
    PipelineReport report = aggregator.Run();
    const auto codes = Reap(children);
    for (std::size_t i = 0; i < codes.size(); ++i) {
      if (codes[i] != 0) {
        throw std::runtime_error("node " + std::to_string(i) + " exited with status " +
                                 std::to_string(codes[i]));
      }
    }
    return report;
  } catch (...) {
    for (const pid_t pid : children) kill(pid, SIGTERM);
    Reap(children);
    throw;
  }
}

int CmdNode(const NodeOptionsCli& o) {
  const json spec = json::parse(o.spec);
  const FleetConfig fleet = FleetConfig::FromJson(spec.at("fleet"));
  const PipelineConfig pipeline = PipelineConfig::FromJson(spec.at("pipeline"));
  const auto nodes = GenerateFleet(fleet);
  const auto it = std::find_if(nodes.begin(), nodes.end(),
                               [&](const NodeDataset& n) { return n.node_id == o.node_id; });
  if (it == nodes.end()) throw std::invalid_argument("node_id not in fleet");
  NodeOptions options;
  options.timeout = std::chrono::milliseconds(o.timeout_ms);
  RunNode(o.host, static_cast<std::uint16_t>(o.port), *it, ParseMode(o.mode), pipeline, options);
  return 0;
}

int CmdEmulate(const EmulateOptions& o, std::ostream& out) {
  const SharingMode mode = ParseMode(o.mode);
  if (o.net != "inproc" && o.net != "tcp") {
    throw std::invalid_argument("unknown --net '" + o.net + "' (expected inproc or tcp)");
  }
  FleetConfig fleet = o.fleet;
  fleet.nodes = o.nodes;
  fleet.seed = o.seed;
  fleet.Validate();
  const auto nodes = GenerateFleet(fleet);

  json config = {{"command", "emulate"}, {"mode", ModeName(mode)},
                 {"net", o.net},         {"eps_img", o.eps_img},
                 {"eps_txt", o.eps_txt ? json(*o.eps_txt) : json()},
                 {"seed", o.seed},       {"fleet", fleet.ToJson()}};
  json reports = json::array();
  std::string csv = "mode,eps_image,eps_text,seed,node_id,accuracy,mean_accuracy\n";
  for (const double eps : o.eps_img) {
    PipelineConfig pipeline;
    pipeline.eps_image = eps;
    pipeline.eps_text = o.eps_txt;
    pipeline.seed = o.seed;
    pipeline.train = o.train;
    pipeline.Validate();
    config["train"] = {{"epochs", o.train.epochs}, {"step", o.train.step},
                       {"l2", o.train.l2},         {"init_scale", o.train.init_scale}};
    const PipelineReport report = o.net == "tcp" ? RunTcp(o, mode, fleet, pipeline)
                                                 : RunPipeline(mode, nodes, pipeline);
    reports.push_back(report.ToJson());
    for (const auto& n : report.nodes) {
      csv += std::string(ModeName(mode)) + "," + FormatDouble(eps) + "," +
             (o.eps_txt ? FormatDouble(*o.eps_txt) : std::string()) + "," +
             std::to_string(o.seed) + "," + std::to_string(n.node_id) + "," +
             FormatDouble(n.accuracy) + "," + FormatDouble(report.mean_accuracy) + "\n";
    }
  }
  const json doc = {{"config", config}, {"reports", reports}};
  if (!o.out.empty()) {
    const fs::path dir(o.out);
    EnsureDir(dir);
    WriteFile(dir / "report.json", doc.dump(2) + "\n");
    WriteFile(dir / "report.csv", csv);
    WriteConfig(dir, config);
  }
  out << doc.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------- noise-image

struct NoiseImageOptions {
  std::string input;
  std::vector<double> eps_list = {kSweepEpsilons.begin(), kSweepEpsilons.end()};
  std::uint64_t seed = 1;
  std::string out = "noise";
};

int CmdNoiseImage(const NoiseImageOptions& o, std::ostream& out) {
  if (o.eps_list.empty()) throw std::invalid_argument("--eps-list is empty");
  for (const double e : o.eps_list) {
    if (!(e > 0) || !std::isfinite(e)) throw std::invalid_argument("epsilon must be positive");
  }
  const ImageMatrix original = LoadImage(o.input);
  const std::string ext = original.channels == 3 ? ".ppm" : ".pgm";
  const fs::path dir(o.out);
  EnsureDir(dir);

  std::vector<ImageMatrix> panels = {original};
  std::vector<std::string> labels = {"original"};
  std::string metrics = "epsilon,mean_abs_diff,psnr,file\n";
  for (std::size_t i = 0; i < o.eps_list.size(); ++i) {
    const double eps = o.eps_list[i];
    // Common seed across epsilons: panels differ only through the scale.
    ImageMatrix noised = DpNoiseImage(original, eps, o.seed);
    const std::string name = "noised_" + std::to_string(i) + "_eps" + FormatDouble(eps) + ext;
    SaveImage(noised, dir / name);
    metrics += FormatDouble(eps) + "," + FormatDouble(MeanAbsoluteDifference(original, noised)) +
               "," + FormatDouble(Psnr(original, noised)) + "," + name + "\n";
    labels.push_back("eps=" + FormatDouble(eps));
    panels.push_back(std::move(noised));
  }
  const Montage montage = MakeMontage(panels, labels);
  SaveImage(montage.image, dir / ("montage" + ext));
  WriteFile(dir / "montage.txt", montage.caption);
  WriteFile(dir / "metrics.csv", metrics);
  WriteConfig(dir, {{"command", "noise-image"},
                    {"input", fs::path(o.input).filename().string()},
                    {"eps_list", o.eps_list},
                    {"seed", o.seed}});
  out << metrics;
  return 0;
}

// ---------------------------------------------------------------- report

struct ReportOptions {
  std::string in;
  std::string out = "charts";
};

int CmdReport(const ReportOptions& o, std::ostream& out) {
  std::ifstream in(o.in);
  if (!in) throw std::runtime_error("cannot read " + o.in);
  const auto rows = ReadResultsCsv(in);
  if (rows.empty()) throw std::invalid_argument("no result rows in " + o.in);
  const auto summary = Summarize(rows);
  const fs::path dir(o.out);
  EnsureDir(dir);
  const json config = {{"command", "report"}, {"in", fs::path(o.in).filename().string()}};
  std::ostringstream summary_csv;
  WriteSummaryCsv(summary_csv, summary);
  WriteFile(dir / "summary.csv", summary_csv.str());
  for (const auto& [name, svg] : ChartsFromSummary(summary, config.dump())) {
    WriteFile(dir / name, svg);
    out << (dir / name).string() << "\n";
  }
  WriteConfig(dir, config);
  return 0;
}

}  // namespace

std::vector<std::string> ResolveArgs(std::vector<std::string> args) {
  std::optional<std::string> config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (config_path) {
    std::ifstream in(*config_path);
    if (!in) throw std::runtime_error("cannot read config " + *config_path);
    const json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
      std::string flag = "--" + key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      if (HasFlag(args, flag)) continue;
      if (value.is_boolean()) {
        if (value.get<bool>()) args.push_back(flag);
      } else if (value.is_array()) {
        args.push_back(flag);
        for (const auto& v : value) args.push_back(ScalarText(v));
      } else if (!value.is_null()) {
        args.push_back(flag);
        args.push_back(ScalarText(value));
      }
    }
  }
  const std::string command = CommandOf(args);
  if (std::find(kSeeded.begin(), kSeeded.end(), command) != kSeeded.end() &&
      !HasFlag(args, "--seed")) {
    if (const char* env = std::getenv("DPIOV_SEED"); env != nullptr && *env != '\0') {
      args.push_back("--seed");
      args.push_back(env);
    }
  }
  return args;
}

int RunCli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  const std::string command = CommandOf(args);
  auto fail = [&](const std::string& message, int code) {
    err << json{{"error", message}, {"command", command}}.dump() << "\n";
    return code;
  };

  CLI::App app{"dpiov: differentially private query and vehicle-fleet experiments"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "Write a synthetic table CSV and schema JSON");
  g->add_option("--out", gen.out, "Output directory")->required();
  g->add_option("--dims", gen.dims, "Domain, e.g. 4x8, 32, 2^5");
  g->add_option("--records", gen.records, "Number of records")->check(CLI::NonNegativeNumber);
  g->add_option("--concentration", gen.concentration, "Dirichlet concentration");
  g->add_option("--seed", gen.seed, "Seed (default: DPIOV_SEED or 1)");

  BenchOptions bench;
  auto* q = app.add_subcommand("query-bench", "Benchmark query-answering strategies");
  q->add_option("--preset", bench.preset, "relative or absolute");
  q->add_option("--mechanisms", bench.mechanisms, "identity fourier wavelet datacube hierarchical");
  q->add_option("--workloads", bench.workloads, "all_range one_way_marginal");
  q->add_option("--eps", bench.eps, "Privacy budgets");
  q->add_option("--dims", bench.dims, "Domain settings");
  q->add_option("--trials", bench.trials, "Trials per configuration")->check(CLI::PositiveNumber);
  q->add_option("--seed", bench.seed, "Base seed (default: DPIOV_SEED or 1)");
  q->add_flag("--no-noise", bench.no_noise, "Disable noise (non-private, for checking)");
  q->add_option("--threads", bench.threads, "Worker threads (0 = all cores)");
  q->add_option("--hybrid-threshold", bench.hybrid_threshold,
                "Wavelet: identity on dimensions up to this size (0 disables)");
  q->add_flag("--consistency", bench.consistency, "Hierarchical: enforce consistency");
  q->add_option("--data", bench.data, "Table CSV to use instead of synthetic counts");
  q->add_option("--schema", bench.schema, "Schema JSON for --data");
  q->add_option("--out", bench.out, "Output directory");

  EmulateOptions emu;
  auto* e = app.add_subcommand("emulate", "Run the GDP or LDP fleet pipeline");
  e->add_option("--mode", emu.mode, "gdp or ldp");
  e->add_option("--nodes", emu.nodes, "Number of vehicles")->check(CLI::PositiveNumber);
  e->add_option("--eps-img", emu.eps_img, "Feature budgets (one report each)");
  e->add_option("--eps-txt", emu.eps_txt, "Label budget; omit to keep labels exact");
  e->add_option("--net", emu.net, "inproc or tcp");
  e->add_option("--seed", emu.seed, "Seed (default: DPIOV_SEED or 1)");
  e->add_option("--per-node", emu.fleet.per_node, "Records per vehicle");
  e->add_option("--feature-dim", emu.fleet.feature_dim, "Feature dimension");
  e->add_option("--classes", emu.fleet.classes, "Number of classes");
  e->add_option("--heterogeneity", emu.fleet.heterogeneity, "Per-vehicle class shift");
  e->add_option("--spread", emu.fleet.spread, "Within-class standard deviation");
  e->add_option("--epochs", emu.train.epochs, "Training epochs");
  e->add_option("--step", emu.train.step, "Gradient step");
  e->add_option("--host", emu.host, "Aggregator address for --net tcp");
  e->add_option("--port", emu.port, "Aggregator port (0 = any free port)");
  e->add_option("--timeout-ms", emu.timeout_ms, "Network timeout");
  e->add_option("--out", emu.out, "Output directory for report.json and report.csv");

  NoiseImageOptions img;
  auto* n = app.add_subcommand("noise-image", "Noise an image at several budgets");
  n->add_option("--input", img.input, "PGM/PPM image")->required();
  n->add_option("--eps-list", img.eps_list, "Budgets");
  n->add_option("--seed", img.seed, "Seed (default: DPIOV_SEED or 1)");
  n->add_option("--out", img.out, "Output directory");

  ReportOptions rep;
  auto* r = app.add_subcommand("report", "Render SVG charts from a results CSV");
  r->add_option("--in", rep.in, "results.csv")->required();
  r->add_option("--out", rep.out, "Output directory");

  NodeOptionsCli node;
  auto* nd = app.add_subcommand("node", "Internal: one vehicle process for --net tcp");
  nd->group("");
  nd->add_option("--host", node.host);
  nd->add_option("--port", node.port)->required();
  nd->add_option("--node-id", node.node_id)->required();
  nd->add_option("--mode", node.mode);
  nd->add_option("--spec", node.spec)->required();
  nd->add_option("--timeout-ms", node.timeout_ms);

  try {
    std::vector<std::string> resolved = ResolveArgs(std::move(args));
    std::reverse(resolved.begin(), resolved.end());
    app.parse(resolved);
  } catch (const CLI::Success& ex) {
    return app.exit(ex, out, err);
  } catch (const CLI::ParseError& ex) {
    return fail(ex.what(), 2);
  } catch (const std::exception& ex) {
    return fail(ex.what(), 2);
  }

  try {
    if (g->parsed()) return CmdGen(gen, out);
    if (q->parsed()) return CmdQueryBench(bench, out);
    if (e->parsed()) return CmdEmulate(emu, out);
    if (n->parsed()) return CmdNoiseImage(img, out);
    if (r->parsed()) return CmdReport(rep, out);
    if (nd->parsed()) return CmdNode(node);
  } catch (const std::exception& ex) {
    return fail(ex.what(), 1);
  }
  return fail("no command", 2);
}

}  // namespace dpiov::cli
