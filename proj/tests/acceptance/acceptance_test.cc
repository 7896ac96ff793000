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

// Acceptance checks. Each criterion prints one PASS/FAIL line; every
// tolerance is pinned here. Run all with no arguments or one with
// --criterion N.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.h"
#include "dpiov/dp_probe.h"
#include "dpiov/emulation/fleet.h"
#include "dpiov/emulation/pipeline.h"
#include "dpiov/experiment.h"
#include "dpiov/format.h"
#include "dpiov/imaging.h"
#include "dpiov/laplace.h"
#include "dpiov/mechanisms.h"
#include "dpiov/rng.h"
#include "dpiov/workload.h"

namespace dpiov::acceptance {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Pinned tolerances and sizes.
constexpr std::uint64_t kSeed = 20260101;
constexpr int kLaplaceSamples = 1'000'000;
constexpr double kLaplaceScale = 2.0;
constexpr double kMeanAbsTolerance = 0.01;   // relative
constexpr double kVarianceTolerance = 0.03;  // relative
constexpr int kProbeSamples = 100'000;
constexpr int kProbeBins = 20;
constexpr double kProbeEpsilon = 0.5;
constexpr double kProbeBound = 0.6;
constexpr double kExactTolerance = 1e-9;
constexpr int kUnbiasedTrials = 10'000;
constexpr double kUnbiasedEpsilon = 0.5;
constexpr double kUnbiasedStderrs = 3.0;
constexpr int kTrendTrials = 1000;
constexpr int kMaxInversions = 1;
constexpr int kFleetNodes = 10;
constexpr int kFleetSeeds = 20;
constexpr double kLabelEpsilon = 0.9;
constexpr double kLabelDropRequired = 0.25;
constexpr int kImageSide = 64;
constexpr int kImageSeeds = 10;

const std::vector<std::string> kPaperDomains = {"32", "4x8", "4x4x2", "4x2x2x2", "2^5"};

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string Num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

fs::path OutDir() {
  const fs::path dir = fs::current_path() / "acceptance_out";
  fs::create_directories(dir);
  return dir;
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

// 1. Laplace calibration.
Outcome LaplaceCalibration() {
  Rng rng(kSeed);
  double sum_abs = 0, sum = 0, sum_sq = 0;
  for (int i = 0; i < kLaplaceSamples; ++i) {
    const double x = SampleLaplace(kLaplaceScale, rng);
    sum_abs += std::abs(x);
    sum += x;
    sum_sq += x * x;
  }
  const double n = kLaplaceSamples;
  const double mean_abs = sum_abs / n;
  const double mean = sum / n;
  const double var = (sum_sq - n * mean * mean) / (n - 1);
  const double want_abs = kLaplaceScale, want_var = 2 * kLaplaceScale * kLaplaceScale;
  const bool ok = std::abs(mean_abs - want_abs) <= kMeanAbsTolerance * want_abs &&
                  std::abs(var - want_var) <= kVarianceTolerance * want_var;
  return {ok, "mean|X|=" + Num(mean_abs) + " (want 2), var=" + Num(var) + " (want 8)"};
}

// 2. Empirical privacy probe on neighbouring 2-cell inputs.
Outcome PrivacyProbe() {
  const Domain d = Domain::Parse("2");
  const DataVector d1(d, Eigen::Vector2d(10, 20));
  const DataVector d2(d, Eigen::Vector2d(10, 21));
  const ScalarMechanism identity = [](const DataVector& x, std::uint64_t seed) {
    return IdentityMechanism(AllRange(x.domain()), x, {kProbeEpsilon, true}, seed).answers[0];
  };
  const ProbeResult r = DpRatioProbe(identity, d1, d2, kProbeSamples, kProbeBins, kSeed);
  return {!r.unbounded && r.max_log_ratio <= kProbeBound,
          "max log-ratio " + Num(r.max_log_ratio) + " over " + std::to_string(r.bins_used) +
              " bins (bound " + Num(kProbeBound) + ")"};
}

// 3. Noise-free reconstruction.
Outcome ExactReconstruction() {
  const Eigen::VectorXd cells = SyntheticCounts(32, {10000, 1.0, kSeed});
  double worst = 0;
  int configs = 0;
  for (const auto& spec : kPaperDomains) {
    const Domain d = Domain::Parse(spec);
    const DataVector x(d, cells);
    for (auto wname : {kAllRangeWorkload, kOneWayMarginalWorkload}) {
      const Workload w = MakeWorkload(wname, d);
      const Eigen::VectorXd truth = Evaluate(w, x);
      for (Strategy s : {Strategy::kFourier, Strategy::kWavelet, Strategy::kDataCube,
                         Strategy::kHierarchical}) {
        const Eigen::VectorXd got = RunMechanism(s, w, x, {1.0, false}, kSeed).answers;
        if (got.size() != truth.size()) return {false, "answer count mismatch"};
        for (Eigen::Index q = 0; q < truth.size(); ++q) {
          worst = std::max(worst, std::abs(got[q] - truth[q]) / std::max(std::abs(truth[q]), 1.0));
        }
        ++configs;
      }
    }
  }
  return {worst <= kExactTolerance,
          std::to_string(configs) + " configurations, worst relative deviation " + Num(worst)};
}

// 4. Per-query unbiasedness on a random 4x8 vector.
Outcome Unbiasedness() {
  const Domain d = Domain::Parse("4x8");
  Rng rng(kSeed);
  Eigen::VectorXd cells(d.total_size());
  for (auto& c : cells) c = static_cast<double>(rng.UniformInt(500));
  const DataVector x(d, cells);
  const Workload w = MakeWorkload(kOneWayMarginalWorkload, d);
  const Eigen::VectorXd truth = Evaluate(w, x);
  double worst_z = 0;
  std::string worst_at;
  for (Strategy s : {Strategy::kFourier, Strategy::kWavelet, Strategy::kHierarchical,
                     Strategy::kIdentity}) {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(truth.size());
    Eigen::VectorXd sq = Eigen::VectorXd::Zero(truth.size());
    for (int t = 0; t < kUnbiasedTrials; ++t) {
      const Eigen::VectorXd e =
          RunMechanism(s, w, x, {kUnbiasedEpsilon, true}, StreamSeed(kSeed, t)).answers - truth;
      sum += e;
      sq += e.cwiseProduct(e);
    }
    const double n = kUnbiasedTrials;
    for (Eigen::Index q = 0; q < truth.size(); ++q) {
      const double mean = sum[q] / n;
      const double var = (sq[q] - n * mean * mean) / (n - 1);
      const double z = std::abs(mean) / std::sqrt(var / n);
      if (z > worst_z) {
        worst_z = z;
        worst_at = std::string(StrategyName(s)) + " q" + std::to_string(q);
      }
    }
  }
  return {worst_z <= kUnbiasedStderrs,
          "largest |mean error| = " + Num(worst_z) + " stderr at " + worst_at};
}

struct TrendRun {
  std::string results_csv;
  std::string summary_csv;
  // (mechanism, workload) -> per-epsilon (mean, stderr) of rel_error, ascending epsilon.
  std::map<std::pair<std::string, std::string>, std::vector<std::pair<double, double>>> curves;
  std::vector<double> epsilons;
};

TrendRun RunRelativePreset() {
  const ExperimentSpec spec = RelativePreset(kTrendTrials, kSeed);
  const auto result = RunExperiment(spec);
  const auto summary = Summarize(result.rows);
  TrendRun run;
  std::ostringstream r, s;
  WriteResultsCsv(r, result.rows);
  WriteSummaryCsv(s, summary);
  run.results_csv = r.str();
  run.summary_csv = s.str();
  run.epsilons = spec.epsilons;
  std::sort(run.epsilons.begin(), run.epsilons.end());
  std::map<std::pair<std::string, std::string>, std::map<double, std::pair<double, double>>> by;
  for (const auto& row : summary) {
    if (row.metric != "rel_error") continue;
    by[{row.mechanism, row.workload}][row.epsilon] = {row.mean, row.stderr_};
  }
  for (const auto& [key, points] : by) {
    for (const auto& [eps, p] : points) run.curves[key].push_back(p);
  }
  return run;
}

// 5. Error does not grow with epsilon.
Outcome EpsilonMonotonicity() {
  const TrendRun run = RunRelativePreset();
  WriteText(OutDir() / "c5_results.csv", run.results_csv);
  WriteText(OutDir() / "c5_summary.csv", run.summary_csv);
  int inversions = 0;
  bool large = false;
  std::string where;
  for (const auto& [key, curve] : run.curves) {
    for (std::size_t i = 1; i < curve.size(); ++i) {
      if (curve[i].first <= curve[i - 1].first) continue;
      ++inversions;
      const double rise = curve[i].first - curve[i - 1].first;
      if (rise >= curve[i].second) large = true;
      where += " " + key.first + "/" + key.second + "@" + Num(run.epsilons[i]);
    }
  }
  return {inversions <= kMaxInversions && !large,
          std::to_string(run.curves.size()) + " curves, " + std::to_string(inversions) +
              " inversion(s)" + (where.empty() ? "" : ":" + where)};
}

// 6. DataCube has the largest error on the one-way marginal preset.
Outcome DataCubeOrdering() {
  const TrendRun run = RunRelativePreset();
  const std::string workload(kOneWayMarginalWorkload);
  const auto& cube = run.curves.at({"datacube", workload});
  std::string violations;
  for (const auto& [key, curve] : run.curves) {
    if (key.second != workload || key.first == "datacube") continue;
    for (std::size_t i = 0; i < curve.size(); ++i) {
      if (cube[i].first < curve[i].first) {
        violations += " eps=" + Num(run.epsilons[i]) + ":datacube " + Num(cube[i].first) + " < " +
                      key.first + " " + Num(curve[i].first) + ";";
      }
    }
  }
  return {violations.empty(), violations.empty() ? "datacube error >= every other mechanism"
                                                 : "violations:" + violations};
}

// 7. Sensitivities and tree depth.
Outcome Sensitivities() {
  std::string bad;
  for (const auto& spec : kPaperDomains) {
    const Domain d = Domain::Parse(spec);
    if (L1Sensitivity(AllRange(d)) != 1.0) bad += " all_range(" + spec + ")";
    if (L1Sensitivity(KWayMarginal(d, 1)) != static_cast<double>(d.num_attributes())) {
      bad += " one_way(" + spec + ")";
    }
  }
  if (hierarchical::TreeLevels(32) != 6) bad += " tree_levels(32)";
  return {bad.empty(), bad.empty() ? "all_range=1, one_way=a for a=1..5, levels(32)=6"
                                   : "mismatch:" + bad};
}

// 8. TCP runs with separate node processes equal the in-process pipeline.
Outcome EmulationEquivalence() {
  setenv("DPIOV_NODE_EXE", DPIOV_BINARY, 1);
  std::string detail;
  bool ok = true;
  for (const char* mode : {"gdp", "ldp"}) {
    const fs::path dir = OutDir() / (std::string("c8_") + mode);
    std::ostringstream out, err;
    const int code = cli::RunCli({"emulate", "--mode", mode, "--nodes", "3", "--net", "tcp",
                                  "--seed", std::to_string(kSeed), "--out", dir.string()},
                                 out, err);
    if (code != 0) return {false, std::string(mode) + " tcp run failed: " + err.str()};
    std::ifstream in(dir / "report.json");
    const auto doc = nlohmann::json::parse(in);
    const PipelineReport tcp = PipelineReport::FromJson(doc.at("reports").at(0));

    FleetConfig fleet;
    fleet.nodes = 3;
    fleet.seed = kSeed;
    PipelineConfig config;
    config.seed = kSeed;
    const PipelineReport local = RunPipeline(ParseMode(mode), GenerateFleet(fleet), config);
    const bool same = tcp == local && tcp.ToJson().dump() == local.ToJson().dump();
    ok = ok && same;
    detail += std::string(mode) + (same ? " identical" : " DIFFERENT") + " (mean " +
              Num(tcp.mean_accuracy) + ") ";
  }
  return {ok, detail};
}

double Spearman(const std::vector<double>& a, const std::vector<double>& b) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return v[i] < v[j]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = (i + j) / 2.0 + 1;
      i = j + 1;
    }
    return r;
  };
  const auto ra = ranks(a), rb = ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double num = 0, da = 0, db = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    num += (ra[i] - ma) * (rb[i] - mb);
    da += (ra[i] - ma) * (ra[i] - ma);
    db += (rb[i] - mb) * (rb[i] - mb);
  }
  return da == 0 || db == 0 ? 0.0 : num / std::sqrt(da * db);
}

struct FleetSweep {
  std::string csv;  // mode,eps_image,eps_text,seed,mean_accuracy
  std::map<std::string, std::vector<double>> mean_by_eps;  // over kSweepEpsilons
  std::map<std::string, double> label_noise;               // eps_img=1, eps_txt=0.9
};

FleetSweep RunFleetSweep() {
  FleetSweep sweep;
  sweep.csv = "mode,eps_image,eps_text,seed,mean_accuracy\n";
  for (SharingMode mode : {SharingMode::kGdp, SharingMode::kLdp}) {
    const std::string name(ModeName(mode));
    std::vector<double> sums(kSweepEpsilons.size(), 0.0);
    double label_sum = 0;
    for (int s = 1; s <= kFleetSeeds; ++s) {
      FleetConfig fleet;
      fleet.nodes = kFleetNodes;
      fleet.seed = StreamSeed(kSeed, s);
      const auto nodes = GenerateFleet(fleet);
      auto run = [&](double eps_img, std::optional<double> eps_txt) {
        PipelineConfig config;
        config.eps_image = eps_img;
        config.eps_text = eps_txt;
        config.seed = fleet.seed;
        const double acc = RunPipeline(mode, nodes, config).mean_accuracy;
        sweep.csv += name + "," + FormatDouble(eps_img) + "," +
                     (eps_txt ? FormatDouble(*eps_txt) : std::string()) + "," +
                     std::to_string(fleet.seed) + "," + FormatDouble(acc) + "\n";
        return acc;
      };
      for (std::size_t i = 0; i < kSweepEpsilons.size(); ++i) {
        sums[i] += run(kSweepEpsilons[i], std::nullopt);
      }
      label_sum += run(1.0, kLabelEpsilon);
    }
    for (double& v : sums) v /= kFleetSeeds;
    sweep.mean_by_eps[name] = sums;
    sweep.label_noise[name] = label_sum / kFleetSeeds;
  }
  return sweep;
}

// 9. Direction of the GDP/LDP trends.
Outcome FleetTrends() {
  const FleetSweep sweep = RunFleetSweep();
  WriteText(OutDir() / "c9_fleet.csv", sweep.csv);
  const std::vector<double> grid(kSweepEpsilons.begin(), kSweepEpsilons.end());
  const auto& gdp = sweep.mean_by_eps.at("gdp");
  const auto& ldp = sweep.mean_by_eps.at("ldp");
  const std::size_t at_one = grid.size() - 1;  // eps = 1
  const bool a = ldp[at_one] > gdp[at_one];
  const double rho_gdp = Spearman(grid, gdp), rho_ldp = Spearman(grid, ldp);
  const bool b = rho_gdp > 0 && rho_ldp > 0;
  bool c = true;
  std::string drops;
  for (const char* m : {"gdp", "ldp"}) {
    const double base = sweep.mean_by_eps.at(m)[at_one];
    const double drop = (base - sweep.label_noise.at(m)) / base;
    c = c && drop >= kLabelDropRequired;
    drops += std::string(" ") + m + "=" + Num(drop);
  }
  return {a && b && c, "(a) eps=1 ldp " + Num(ldp[at_one]) + " vs gdp " + Num(gdp[at_one]) +
                           "; (b) spearman gdp " + Num(rho_gdp) + " ldp " + Num(rho_ldp) +
                           "; (c) label-noise drop" + drops};
}

// 10. Image sweep.
Outcome ImageSweep() {
  ImageMatrix img(kImageSide, kImageSide, 1);
  for (int y = 0; y < kImageSide; ++y) {
    for (int x = 0; x < kImageSide; ++x) {
      img.at(y, x) = 0.5 * x / (kImageSide - 1) + 0.25 * ((x / 8 + y / 8) % 2) +
                     0.2 * y / (kImageSide - 1);
    }
  }
  std::vector<double> mad(kSweepEpsilons.size(), 0), psnr(kSweepEpsilons.size(), 0);
  for (int s = 0; s < kImageSeeds; ++s) {
    const std::uint64_t seed = StreamSeed(kSeed, s);
    for (std::size_t i = 0; i < kSweepEpsilons.size(); ++i) {
      const ImageMatrix noised = DpNoiseImage(img, kSweepEpsilons[i], seed);
      mad[i] += MeanAbsoluteDifference(img, noised) / kImageSeeds;
      psnr[i] += Psnr(img, noised) / kImageSeeds;
    }
  }
  bool ok = true;
  for (std::size_t i = 1; i < mad.size(); ++i) {
    ok = ok && mad[i] < mad[i - 1] && psnr[i] > psnr[i - 1];
  }
  std::string detail = "mad";
  for (double v : mad) detail += " " + Num(v);
  detail += "; psnr";
  for (double v : psnr) detail += " " + Num(v);
  return {ok, detail};
}

// 11. Re-running criteria 5 and 9 gives identical bytes.
Outcome Determinism() {
  const TrendRun a = RunRelativePreset();
  const TrendRun b = RunRelativePreset();
  const FleetSweep c = RunFleetSweep();
  const FleetSweep d = RunFleetSweep();
  const bool same_trend = a.results_csv == b.results_csv && a.summary_csv == b.summary_csv;
  const bool same_fleet = c.csv == d.csv;
  return {same_trend && same_fleet,
          std::string("trend csv ") + (same_trend ? "identical" : "DIFFERENT") + " (" +
              std::to_string(a.results_csv.size()) + " bytes), fleet csv " +
              (same_fleet ? "identical" : "DIFFERENT") + " (" + std::to_string(c.csv.size()) +
              " bytes)"};
}

const std::vector<Criterion>& Criteria() {
  static const std::vector<Criterion> all = {
      {1, "laplace_calibration", 5, LaplaceCalibration},
      {2, "dp_probe", 10, PrivacyProbe},
      {3, "exact_reconstruction", 5, ExactReconstruction},
      {4, "unbiasedness", 60, Unbiasedness},
      {5, "epsilon_monotonicity", 120, EpsilonMonotonicity},
      {6, "datacube_ordering", 120, DataCubeOrdering},
      {7, "sensitivities", 1, Sensitivities},
      {8, "emulation_equivalence", 30, EmulationEquivalence},
      {9, "fleet_trends", 300, FleetTrends},
      {10, "image_sweep", 10, ImageSweep},
      {11, "determinism", 600, Determinism},
  };
  return all;
}

bool RunOne(const Criterion& c) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = c.run();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  const bool in_time = seconds < c.budget_seconds;
  const bool pass = o.pass && in_time;
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << " " << c.name << ": "
            << o.detail << " [" << Num(seconds) << " s, budget " << Num(c.budget_seconds) << " s"
            << (in_time ? "" : ", OVER BUDGET") << "]" << std::endl;
  return pass;
}

}  // namespace
}  // namespace dpiov::acceptance

int main(int argc, char** argv) {
  using dpiov::acceptance::Criteria;
  CLI::App app{"dpiov acceptance checks"};
  int only = 0;
  app.add_option("--criterion", only, "Run a single criterion (1-11)")->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);
  bool all_pass = true;
  for (const auto& c : Criteria()) {
    if (only != 0 && c.id != only) continue;
    all_pass = dpiov::acceptance::RunOne(c) && all_pass;
  }
  return all_pass ? 0 : 1;
}
