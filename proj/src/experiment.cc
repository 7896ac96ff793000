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

#include "dpiov/experiment.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "dpiov/format.h"
#include "dpiov/metrics.h"
#include "dpiov/rng.h"

namespace dpiov {
namespace {

constexpr std::uint64_t kDataStream = std::uint64_t{0xDA7A} << 40;

template <typename Fn>
void ParallelFor(int n, int threads, Fn fn) {
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([=, &fn] {
      for (int i = t; i < n; i += threads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

std::vector<std::string> SplitFields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

constexpr char kResultsHeader[] =
    "experiment,mechanism,workload,domain,epsilon,trial,abs_error,rel_error,seed";

}  // namespace

Workload MakeWorkload(std::string_view name, const Domain& domain) {
  if (name == kAllRangeWorkload) return AllRange(domain);
  if (name == kOneWayMarginalWorkload) return KWayMarginal(domain, 1);
  throw std::invalid_argument("unknown workload '" + std::string(name) +
                              "' (expected all_range or one_way_marginal)");
}

Eigen::VectorXd SyntheticCounts(std::int64_t cells, const SyntheticSource& source) {
  if (cells < 1 || source.records < 0 || !(source.concentration > 0)) {
    throw std::invalid_argument("bad synthetic data parameters");
  }
  // Disjoint from the per-trial streams StreamSeed(seed, trial).
  Rng rng(StreamSeed(StreamSeed(source.seed, kDataStream), static_cast<std::uint64_t>(cells)));
  std::gamma_distribution<double> gamma(source.concentration, 1.0);
  std::vector<double> cumulative(static_cast<std::size_t>(cells));
  double total = 0;
  for (auto& c : cumulative) {
    total += gamma(rng);
    c = total;
  }
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(cells);
  for (std::int64_t r = 0; r < source.records; ++r) {
    const double u = rng.Uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    counts[it - cumulative.begin()] += 1.0;
  }
  return counts;
}

DataVector DataSource::For(const Domain& domain) const {
  if (fixture) {
    if (fixture->size() != domain.total_size()) {
      throw std::invalid_argument("fixture has " + std::to_string(fixture->size()) +
                                  " cells, domain " + domain.Label() + " needs " +
                                  std::to_string(domain.total_size()));
    }
    return DataVector(domain, *fixture);
  }
  return DataVector(domain, SyntheticCounts(domain.total_size(), synthetic));
}

void ExperimentSpec::Validate() const {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (mechanisms.empty() || workloads.empty() || domains.empty() || epsilons.empty()) {
    throw std::invalid_argument("experiment needs mechanisms, workloads, domains and epsilons");
  }
  for (double eps : epsilons) PrivacyParams{eps, true}.Validate();
  if (preset == "absolute" &&
      std::find(mechanisms.begin(), mechanisms.end(), Strategy::kDataCube) != mechanisms.end()) {
    throw std::invalid_argument(
        "datacube is excluded from the absolute-error preset: its absolute error is too "
        "dataset-dependent to compare across dimension settings");
  }
  for (const auto& d : domains) {
    const Domain domain = Domain::Parse(d);
    for (const auto& w : workloads) {
      const Workload workload = MakeWorkload(w, domain);
      for (Strategy s : mechanisms) {
        try {
          CheckCompatible(s, workload, options);
        } catch (const std::invalid_argument& e) {
          throw std::invalid_argument("incompatible combination " + std::string(StrategyName(s)) +
                                      " / " + w + " / " + d + ": " + e.what());
        }
      }
    }
  }
}

nlohmann::json ExperimentSpec::ToJson() const {
  std::vector<std::string> mechs;
  for (Strategy s : mechanisms) mechs.emplace_back(StrategyName(s));
  nlohmann::json source;
  if (data.fixture) {
    source = {{"source", "fixture"}, {"label", data.label}};
  } else {
    source = {{"source", "synthetic"},
              {"records", data.synthetic.records},
              {"concentration", data.synthetic.concentration},
              {"seed", data.synthetic.seed}};
  }
  return {{"id", id},
          {"preset", preset},
          {"mechanisms", mechs},
          {"workloads", workloads},
          {"domains", domains},
          {"epsilons", epsilons},
          {"trials", trials},
          {"base_seed", base_seed},
          {"noise_enabled", noise_enabled},
          {"wavelet_hybrid_threshold", options.wavelet.hybrid_threshold},
          {"hierarchical_consistency", options.hierarchical.consistency},
          {"data", source}};
}

ExperimentSpec RelativePreset(int trials, std::uint64_t seed) {
  ExperimentSpec spec;
  spec.id = "relative";
  spec.preset = "relative";
  spec.mechanisms = {Strategy::kFourier, Strategy::kWavelet, Strategy::kDataCube,
                     Strategy::kHierarchical};
  spec.workloads = {std::string(kAllRangeWorkload), std::string(kOneWayMarginalWorkload)};
  spec.domains = {"4x8"};
  spec.epsilons = {0.1, 0.2, 0.5, 1.0, 2.5};
  spec.trials = trials;
  spec.base_seed = seed;
  return spec;
}

ExperimentSpec AbsolutePreset(int trials, std::uint64_t seed) {
  ExperimentSpec spec;
  spec.id = "absolute";
  spec.preset = "absolute";
  spec.mechanisms = {Strategy::kFourier, Strategy::kWavelet, Strategy::kHierarchical};
  spec.workloads = {std::string(kAllRangeWorkload), std::string(kOneWayMarginalWorkload)};
  spec.domains = {"32", "4x8", "4x4x2", "4x2x2x2", "2^5"};
  spec.epsilons = {0.5};
  spec.trials = trials;
  spec.base_seed = seed;
  return spec;
}

ExperimentResult RunExperiment(const ExperimentSpec& spec, int threads) {
  spec.Validate();
  ExperimentResult result;
  for (const auto& workload_name : spec.workloads) {
    for (const auto& domain_label : spec.domains) {
      const Domain domain = Domain::Parse(domain_label);
      const Workload workload = MakeWorkload(workload_name, domain);
      const DataVector x = spec.data.For(domain);
      const Eigen::VectorXd truth = Evaluate(workload, x);
      for (Strategy strategy : spec.mechanisms) {
        for (double eps : spec.epsilons) {
          const PrivacyParams params{eps, spec.noise_enabled};
          std::vector<ResultRow> rows(static_cast<std::size_t>(spec.trials));
          std::string measurements;
          ParallelFor(spec.trials, threads, [&](int trial) {
            const std::uint64_t seed = StreamSeed(spec.base_seed, static_cast<std::uint64_t>(trial));
            const auto run = RunMechanism(strategy, workload, x, params, seed, spec.options);
            const auto rel = RelativeError(run.answers, truth);
            rows[trial] = {spec.id,     std::string(StrategyName(strategy)),
                           workload_name, domain_label,
                           eps,         trial,
                           AbsoluteError(run.answers, truth),
                           rel.value,   seed,
                           rel.guarded};
            if (trial == 0) measurements = run.MeasurementsString();
          });
          result.metadata.push_back({std::string(StrategyName(strategy)), workload_name,
                                     domain_label, eps, StreamSeed(spec.base_seed, 0),
                                     measurements});
          result.rows.insert(result.rows.end(), rows.begin(), rows.end());
        }
      }
    }
  }
  return result;
}

std::vector<SummaryRow> Summarize(const std::vector<ResultRow>& rows) {
  struct Key {
    std::string experiment, mechanism, workload, domain;
    double epsilon;
    auto Tie() const { return std::tie(experiment, mechanism, workload, domain, epsilon); }
    bool operator<(const Key& o) const { return Tie() < o.Tie(); }
  };
  std::vector<Key> order;
  std::map<Key, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const auto& r : rows) {
    Key key{r.experiment, r.mechanism, r.workload, r.domain, r.epsilon};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.first.push_back(r.abs_error);
    it->second.second.push_back(r.rel_error);
  }
  auto stats = [](std::vector<double> v, SummaryRow& out) {
    const double n = static_cast<double>(v.size());
    double mean = 0;
    for (double x : v) mean += x;
    mean /= n;
    double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    out.trials = static_cast<int>(v.size());
    out.mean = mean;
    out.stderr_ = v.size() > 1 ? std::sqrt(ss / (n - 1) / n) : 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    out.median = v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
  };
  std::vector<SummaryRow> summary;
  for (const auto& key : order) {
    const auto& [abs_values, rel_values] = groups[key];
    for (const char* metric : {"abs_error", "rel_error"}) {
      SummaryRow row{key.experiment, key.mechanism, key.workload, key.domain, key.epsilon, metric};
      stats(std::string(metric) == "abs_error" ? abs_values : rel_values, row);
      summary.push_back(std::move(row));
    }
  }
  return summary;
}

void WriteResultsCsv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kResultsHeader << '\n';
  for (const auto& r : rows) {
    out << r.experiment << ',' << r.mechanism << ',' << r.workload << ',' << r.domain << ','
        << FormatDouble(r.epsilon) << ',' << r.trial << ',' << FormatDouble(r.abs_error) << ','
        << FormatDouble(r.rel_error) << ',' << r.seed << '\n';
  }
}

std::vector<ResultRow> ReadResultsCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("results CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kResultsHeader) throw ParseError("results CSV: unexpected header '" + line + "'");
  std::vector<ResultRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = SplitFields(line);
    if (f.size() != 9) {
      throw ParseError("results CSV line " + std::to_string(line_no) + ": expected 9 fields");
    }
    try {
      ResultRow r;
      r.experiment = f[0];
      r.mechanism = f[1];
      r.workload = f[2];
      r.domain = f[3];
      r.epsilon = std::stod(f[4]);
      r.trial = std::stoi(f[5]);
      r.abs_error = std::stod(f[6]);
      r.rel_error = std::stod(f[7]);
      r.seed = std::stoull(f[8]);
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw ParseError("results CSV line " + std::to_string(line_no) + ": bad number");
    }
  }
  return rows;
}

void WriteSummaryCsv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "experiment,mechanism,workload,domain,epsilon,metric,trials,mean,stderr,median\n";
  for (const auto& r : rows) {
    out << r.experiment << ',' << r.mechanism << ',' << r.workload << ',' << r.domain << ','
        << FormatDouble(r.epsilon) << ',' << r.metric << ',' << r.trials << ','
        << FormatDouble(r.mean) << ',' << FormatDouble(r.stderr_) << ','
        << FormatDouble(r.median) << '\n';
  }
}

void WriteMetadataCsv(std::ostream& out, const std::vector<MetadataRow>& rows) {
  out << "mechanism,workload,domain,epsilon,seed,measurements\n";
  for (const auto& r : rows) {
    out << r.mechanism << ',' << r.workload << ',' << r.domain << ',' << FormatDouble(r.epsilon)
        << ',' << r.seed << ',' << r.measurements << '\n';
  }
}

std::string ComparisonReport(const std::vector<SummaryRow>& summary) {
  using Config = std::tuple<std::string, std::string, std::string, double>;  // metric, workload, domain, eps
  std::map<Config, std::vector<const SummaryRow*>> by_config;
  for (const auto& row : summary) {
    by_config[{row.metric, row.workload, row.domain, row.epsilon}].push_back(&row);
  }
  std::ostringstream out;
  out << "Mean-error orderings (lowest first)\n";
  std::vector<std::string> checks;
  for (auto& [config, rows] : by_config) {
    const auto& [metric, workload, domain, eps] = config;
    std::sort(rows.begin(), rows.end(), [](const SummaryRow* a, const SummaryRow* b) {
      return a->mean != b->mean ? a->mean < b->mean : a->mechanism < b->mechanism;
    });
    out << metric << ' ' << workload << ' ' << domain << " eps=" << FormatDouble(eps) << ": ";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i) out << " < ";
      out << rows[i]->mechanism << '(' << FormatDouble(rows[i]->mean) << ')';
    }
    out << '\n';
    if (metric != "rel_error" || rows.size() < 2) continue;
    const std::string where = workload + ' ' + domain + " eps=" + FormatDouble(eps);
    auto has = [&](const std::string& m) {
      return std::any_of(rows.begin(), rows.end(), [&](auto* r) { return r->mechanism == m; });
    };
    if (has("datacube")) {
      checks.push_back("datacube has the largest error on " + where + ": " +
                       (rows.back()->mechanism == "datacube" ? "yes" : "no"));
    }
    if (workload == kAllRangeWorkload && has("hierarchical")) {
      checks.push_back("hierarchical is best on " + where + ": " +
                       (rows.front()->mechanism == "hierarchical" ? "yes" : "no"));
    }
    if (workload == kOneWayMarginalWorkload && has("fourier")) {
      checks.push_back("fourier is best on " + where + ": " +
                       (rows.front()->mechanism == "fourier" ? "yes" : "no"));
    }
  }
  out << "\nTrend checks (informational)\n";
  for (const auto& c : checks) out << c << '\n';
  return out.str();
}

}  // namespace dpiov
