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

#ifndef DPIOV_EXPERIMENT_H_
#define DPIOV_EXPERIMENT_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "dpiov/domain.h"
#include "dpiov/mechanisms.h"
#include "dpiov/workload.h"
#include "json.hpp"

namespace dpiov {

// Workload names used by experiments and the CLI.
inline constexpr std::string_view kAllRangeWorkload = "all_range";
inline constexpr std::string_view kOneWayMarginalWorkload = "one_way_marginal";

Workload MakeWorkload(std::string_view name, const Domain& domain);

// Dirichlet(concentration) cell probabilities, then `records` categorical
// draws. Defaults give 10^4 records.
struct SyntheticSource {
  std::int64_t records = 10000;
  double concentration = 1.0;
  std::uint64_t seed = 1;
};

Eigen::VectorXd SyntheticCounts(std::int64_t cells, const SyntheticSource& source);

// Cell counts for an experiment. A fixture vector is re-read row-major under
// every requested domain setting of the same size, so the dimension sweep
// always sees the same records.
struct DataSource {
  std::optional<Eigen::VectorXd> fixture;
  std::string label;  // where the fixture came from, for provenance
  SyntheticSource synthetic;

  DataVector For(const Domain& domain) const;
};

struct ExperimentSpec {
  std::string id = "custom";
  // "relative", "absolute" or empty for explicit settings.
  std::string preset;
  std::vector<Strategy> mechanisms;
  std::vector<std::string> workloads;
  std::vector<std::string> domains;
  std::vector<double> epsilons;
  int trials = 1000;
  std::uint64_t base_seed = 1;
  bool noise_enabled = true;
  MechanismOptions options;
  DataSource data;

  // Throws std::invalid_argument on empty/invalid settings and on
  // mechanism/workload/domain combinations that cannot run.
  void Validate() const;
  nlohmann::json ToJson() const;
};

// Fourier, Wavelet, DataCube, Hierarchical x both workloads x
// eps in {0.1, 0.2, 0.5, 1, 2.5} on 4x8.
ExperimentSpec RelativePreset(int trials, std::uint64_t seed);
// Fourier, Wavelet, Hierarchical x both workloads x
// {32, 4x8, 4x4x2, 4x2x2x2, 2^5} at eps = 0.5.
ExperimentSpec AbsolutePreset(int trials, std::uint64_t seed);

struct ResultRow {
  std::string experiment;
  std::string mechanism;
  std::string workload;
  std::string domain;
  double epsilon = 0;
  int trial = 0;
  double abs_error = 0;
  double rel_error = 0;
  std::uint64_t seed = 0;
  bool rel_guarded = false;  // not serialised
};

// Mechanism metadata of the first trial of each configuration.
struct MetadataRow {
  std::string mechanism;
  std::string workload;
  std::string domain;
  double epsilon = 0;
  std::uint64_t seed = 0;
  std::string measurements;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::vector<MetadataRow> metadata;
};

// Rows ordered by (workload, domain, mechanism, epsilon, trial). Trial t uses
// seed StreamSeed(base_seed, t) for every configuration. `threads` <= 0 uses
// the hardware concurrency.
ExperimentResult RunExperiment(const ExperimentSpec& spec, int threads = 0);

struct SummaryRow {
  std::string experiment;
  std::string mechanism;
  std::string workload;
  std::string domain;
  double epsilon = 0;
  std::string metric;  // "abs_error" or "rel_error"
  int trials = 0;
  double mean = 0;
  double stderr_ = 0;
  double median = 0;
};

std::vector<SummaryRow> Summarize(const std::vector<ResultRow>& rows);

// experiment,mechanism,workload,domain,epsilon,trial,abs_error,rel_error,seed
void WriteResultsCsv(std::ostream& out, const std::vector<ResultRow>& rows);
std::vector<ResultRow> ReadResultsCsv(std::istream& in);
// experiment,mechanism,workload,domain,epsilon,metric,trials,mean,stderr,median
void WriteSummaryCsv(std::ostream& out, const std::vector<SummaryRow>& rows);
void WriteMetadataCsv(std::ostream& out, const std::vector<MetadataRow>& rows);

// Plain-text orderings of mean errors per configuration, with the trend
// checks that are reported but never asserted.
std::string ComparisonReport(const std::vector<SummaryRow>& summary);

}  // namespace dpiov

#endif  // DPIOV_EXPERIMENT_H_
