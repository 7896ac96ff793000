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

#include <sstream>

#include "dpiov/metrics.h"
#include "dpiov/rng.h"
#include "dpiov/svg_chart.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dpiov {
namespace {

std::string ResultsCsv(const ExperimentSpec& spec, int threads = 0) {
  std::ostringstream out;
  WriteResultsCsv(out, RunExperiment(spec, threads).rows);
  return out.str();
}

int Count(const std::string& haystack, const std::string& needle) {
  int n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos;
       pos = haystack.find(needle, pos + 1)) {
    ++n;
  }
  return n;
}

TEST(ExperimentTest, RelativePresetGrid) {
  const ExperimentSpec spec = RelativePreset(3, 1);
  EXPECT_EQ(spec.mechanisms.size(), 4u);
  EXPECT_EQ(spec.workloads.size(), 2u);
  EXPECT_EQ(spec.epsilons, (std::vector<double>{0.1, 0.2, 0.5, 1.0, 2.5}));
  EXPECT_EQ(spec.domains, (std::vector<std::string>{"4x8"}));
  const auto result = RunExperiment(spec);
  EXPECT_EQ(result.rows.size(), 4u * 2 * 5 * 3);
  EXPECT_EQ(result.metadata.size(), 4u * 2 * 5);
  EXPECT_EQ(Summarize(result.rows).size(), 4u * 2 * 5 * 2);
}

TEST(ExperimentTest, AbsolutePresetExcludesDataCube) {
  ExperimentSpec spec = AbsolutePreset(2, 1);
  EXPECT_EQ(spec.domains.size(), 5u);
  EXPECT_EQ(spec.epsilons, (std::vector<double>{0.5}));
  EXPECT_EQ(std::count(spec.mechanisms.begin(), spec.mechanisms.end(), Strategy::kDataCube), 0);
  EXPECT_EQ(RunExperiment(spec).rows.size(), 3u * 2 * 5 * 2);
  spec.mechanisms.push_back(Strategy::kDataCube);
  try {
    spec.Validate();
    FAIL() << "datacube accepted in the absolute preset";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("datacube"), std::string::npos);
  }
}

TEST(ExperimentTest, NoiselessSingleTrialHasZeroErrors) {
  ExperimentSpec spec = AbsolutePreset(1, 4);
  spec.noise_enabled = false;
  for (const auto& row : RunExperiment(spec).rows) {
    EXPECT_EQ(row.abs_error, 0.0) << row.mechanism << " " << row.domain;
    EXPECT_EQ(row.rel_error, 0.0);
  }
}

TEST(ExperimentTest, RowsEqualDirectComposition) {
  ExperimentSpec spec;
  spec.mechanisms = {Strategy::kFourier, Strategy::kHierarchical};
  spec.workloads = {std::string(kOneWayMarginalWorkload)};
  spec.domains = {"4x8"};
  spec.epsilons = {0.5};
  spec.trials = 5;
  spec.base_seed = 31;
  const auto rows = RunExperiment(spec).rows;
  const Domain d = Domain::Parse("4x8");
  const DataVector x = spec.data.For(d);
  const Workload w = KWayMarginal(d, 1);
  const Eigen::VectorXd truth = Evaluate(w, x);
  ASSERT_EQ(rows.size(), 10u);
  for (const auto& row : rows) {
    const std::uint64_t seed = StreamSeed(31, static_cast<std::uint64_t>(row.trial));
    EXPECT_EQ(row.seed, seed);
    const auto r = RunMechanism(ParseStrategy(row.mechanism), w, x, {0.5, true}, seed);
    EXPECT_EQ(row.abs_error, AbsoluteError(r.answers, truth));
    EXPECT_EQ(row.rel_error, RelativeError(r.answers, truth).value);
  }
}

TEST(ExperimentTest, CsvIsByteStableAndThreadIndependent) {
  const ExperimentSpec spec = RelativePreset(20, 9);
  const std::string a = ResultsCsv(spec, 1);
  EXPECT_EQ(a, ResultsCsv(spec, 4));
  EXPECT_EQ(a.substr(0, a.find('\n')),
            "experiment,mechanism,workload,domain,epsilon,trial,abs_error,rel_error,seed");
  std::istringstream in(a);
  std::ostringstream again;
  WriteResultsCsv(again, ReadResultsCsv(in));
  EXPECT_EQ(again.str(), a);
}

TEST(ExperimentTest, SummaryStatistics) {
  std::vector<ResultRow> rows;
  for (double v : {1.0, 2.0, 4.0, 9.0}) {
    ResultRow r;
    r.experiment = "e";
    r.mechanism = "identity";
    r.workload = "all_range";
    r.domain = "4x8";
    r.epsilon = 1;
    r.abs_error = v;
    r.rel_error = v / 10;
    rows.push_back(r);
  }
  const auto s = Summarize(rows);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].metric, "abs_error");
  EXPECT_DOUBLE_EQ(s[0].mean, 4.0);
  EXPECT_DOUBLE_EQ(s[0].median, 3.0);
  // sample sd = sqrt(((9 + 4 + 0 + 25) / 3)), stderr = sd / 2
  EXPECT_NEAR(s[0].stderr_, std::sqrt(38.0 / 3) / 2, 1e-12);
  EXPECT_DOUBLE_EQ(s[1].mean, 0.4);
}

TEST(ExperimentTest, SyntheticCountsAreDeterministicMultinomials) {
  const SyntheticSource source{10000, 1.0, 5};
  const Eigen::VectorXd a = SyntheticCounts(32, source);
  EXPECT_EQ(a, SyntheticCounts(32, source));
  EXPECT_EQ(a.sum(), 10000);
  EXPECT_GE(a.minCoeff(), 0);
  EXPECT_NE(a, SyntheticCounts(32, {10000, 1.0, 6}));
  EXPECT_EQ(SyntheticCounts(32, {0, 1.0, 5}).sum(), 0);
}

TEST(ExperimentTest, FixtureIsReshapedForEveryDomain) {
  DataSource source;
  source.fixture = Eigen::VectorXd::LinSpaced(32, 0, 31);
  for (const auto& label : testing::kPaperDomains) {
    EXPECT_EQ(source.For(Domain::Parse(label)).counts(), *source.fixture);
  }
  EXPECT_THROW(source.For(Domain::Parse("4x4")), std::invalid_argument);
}

TEST(ExperimentTest, RejectsInvalidSpecs) {
  ExperimentSpec spec = RelativePreset(10, 1);
  spec.trials = 0;
  EXPECT_THROW(spec.Validate(), std::invalid_argument);
  spec = RelativePreset(10, 1);
  spec.epsilons = {0.5, -1};
  EXPECT_THROW(spec.Validate(), std::invalid_argument);
  spec = RelativePreset(10, 1);
  spec.domains = {"3x8"};
  EXPECT_THROW(spec.Validate(), std::invalid_argument);  // fourier needs powers of two
  spec = RelativePreset(10, 1);
  spec.workloads = {"two_way"};
  EXPECT_THROW(spec.Validate(), std::invalid_argument);
}

// Noise scales with 1/eps on common seeds, so means fall strictly.
TEST(ExperimentTest, RelativeErrorFallsWithEpsilon) {
  const auto summary = Summarize(RunExperiment(RelativePreset(50, 2)).rows);
  for (std::size_t i = 0; i + 1 < summary.size(); ++i) {
    const auto& a = summary[i];
    for (std::size_t j = i + 1; j < summary.size(); ++j) {
      const auto& b = summary[j];
      if (a.metric == b.metric && a.mechanism == b.mechanism && a.workload == b.workload &&
          a.epsilon < b.epsilon) {
        EXPECT_GT(a.mean, b.mean) << a.mechanism << " " << a.workload;
      }
    }
  }
}

TEST(ChartTest, OneChartPerWorkloadWithOneSeriesPerMechanism) {
  const auto summary = Summarize(RunExperiment(RelativePreset(5, 1)).rows);
  const auto charts = ChartsFromSummary(summary, "test run");
  ASSERT_EQ(charts.size(), 2u);
  EXPECT_EQ(charts[0].first, "chart_all_range.svg");
  EXPECT_EQ(charts[1].first, "chart_one_way_marginal.svg");
  for (const auto& [name, svg] : charts) {
    EXPECT_EQ(Count(svg, "<polyline"), 4) << name;
    EXPECT_NE(svg.find("<desc>test run</desc>"), std::string::npos);
  }
  EXPECT_EQ(ChartsFromSummary(summary, "test run"), charts);
  EXPECT_THROW(ChartsFromSummary({}, ""), std::invalid_argument);
}

TEST(ChartTest, AbsoluteSweepPlotsAgainstDomains) {
  const auto summary = Summarize(RunExperiment(AbsolutePreset(3, 1)).rows);
  const auto charts = ChartsFromSummary(summary, "");
  ASSERT_EQ(charts.size(), 2u);
  EXPECT_NE(charts[0].second.find("mean absolute error vs domain"), std::string::npos);
  EXPECT_EQ(Count(charts[0].second, "<polyline"), 3);
}

TEST(ComparisonTest, ListsOrderingsAndTrendChecks) {
  const auto report = ComparisonReport(Summarize(RunExperiment(RelativePreset(20, 1)).rows));
  EXPECT_NE(report.find("rel_error one_way_marginal 4x8 eps=0.5: "), std::string::npos);
  EXPECT_NE(report.find("datacube has the largest error on one_way_marginal 4x8 eps=0.5"),
            std::string::npos);
}

}  // namespace
}  // namespace dpiov
