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

#ifndef DPIOV_SVG_CHART_H_
#define DPIOV_SVG_CHART_H_

#include <string>
#include <utility>
#include <vector>

#include "dpiov/experiment.h"

namespace dpiov {

struct ChartSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;  // (x, y)
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  // When non-empty, x values are indices into these category labels.
  std::vector<std::string> x_categories;
  std::vector<ChartSeries> series;
  // Free text embedded in the SVG <desc> element (resolved run config).
  std::string description;
};

// Deterministic SVG text; identical charts render to identical bytes.
std::string RenderSvg(const LineChart& chart);

// One chart per workload: mean relative error against epsilon (log x axis)
// when the summary sweeps epsilon, otherwise mean absolute error against the
// domain setting. Returns (file name, svg) pairs.
std::vector<std::pair<std::string, std::string>> ChartsFromSummary(
    const std::vector<SummaryRow>& summary, const std::string& description);

}  // namespace dpiov

#endif  // DPIOV_SVG_CHART_H_
