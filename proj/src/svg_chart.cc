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

#include "dpiov/svg_chart.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <stdexcept>

namespace dpiov {
namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 60;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                   "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string Tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string RenderSvg(const LineChart& chart) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymax = 0;
  for (const auto& s : chart.series) {
    for (auto [x, y] : s.points) {
      const double tx = chart.log_x ? std::log10(x) : x;
      xmin = std::min(xmin, tx);
      xmax = std::max(xmax, tx);
      ymax = std::max(ymax, y);
    }
  }
  if (!std::isfinite(xmin)) {
    xmin = 0;
    xmax = 1;
  }
  if (xmax == xmin) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (!(ymax > 0)) ymax = 1;
  ymax *= 1.05;

  const double plot_w = kWidth - kLeft - kRight, plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) {
    const double tx = chart.log_x ? std::log10(x) : x;
    return kLeft + (tx - xmin) / (xmax - xmin) * plot_w;
  };
  auto py = [&](double y) { return kTop + plot_h - y / ymax * plot_h; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + Num(kWidth) + "\" height=\"" +
         Num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<desc>" + Escape(chart.description) + "</desc>\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + Num(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
         Escape(chart.title) + "</text>\n";
  // Axes.
  svg += "<line x1=\"" + Num(kLeft) + "\" y1=\"" + Num(kTop + plot_h) + "\" x2=\"" +
         Num(kLeft + plot_w) + "\" y2=\"" + Num(kTop + plot_h) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + Num(kLeft) + "\" y1=\"" + Num(kTop) + "\" x2=\"" + Num(kLeft) +
         "\" y2=\"" + Num(kTop + plot_h) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double y = ymax * i / 4;
    svg += "<text x=\"" + Num(kLeft - 6) + "\" y=\"" + Num(py(y) + 4) +
           "\" text-anchor=\"end\">" + Tick(y) + "</text>\n";
  }
  std::set<double> xs;
  for (const auto& s : chart.series) {
    for (auto [x, y] : s.points) xs.insert(x);
  }
  for (double x : xs) {
    std::string label = Tick(x);
    if (!chart.x_categories.empty()) {
      const auto idx = static_cast<std::size_t>(x);
      label = idx < chart.x_categories.size() ? chart.x_categories[idx] : label;
    }
    svg += "<text x=\"" + Num(px(x)) + "\" y=\"" + Num(kTop + plot_h + 18) +
           "\" text-anchor=\"middle\">" + Escape(label) + "</text>\n";
  }
  svg += "<text x=\"" + Num(kLeft + plot_w / 2) + "\" y=\"" + Num(kHeight - 15) +
         "\" text-anchor=\"middle\">" + Escape(chart.x_label) + "</text>\n";
  svg += "<text transform=\"translate(18," + Num(kTop + plot_h / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">" + Escape(chart.y_label) + "</text>\n";

  for (std::size_t i = 0; i < chart.series.size(); ++i) {
    const auto& s = chart.series[i];
    const char* color = kColors[i % std::size(kColors)];
    std::string points;
    for (auto [x, y] : s.points) {
      if (!points.empty()) points += ' ';
      points += Num(px(x)) + "," + Num(py(y));
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
    for (auto [x, y] : s.points) {
      svg += "<circle cx=\"" + Num(px(x)) + "\" cy=\"" + Num(py(y)) + "\" r=\"3\" fill=\"" +
             color + "\"/>\n";
    }
    const double ly = kTop + 10 + 18 * static_cast<double>(i);
    svg += "<line x1=\"" + Num(kWidth - kRight + 12) + "\" y1=\"" + Num(ly) + "\" x2=\"" +
           Num(kWidth - kRight + 32) + "\" y2=\"" + Num(ly) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + Num(kWidth - kRight + 38) + "\" y=\"" + Num(ly + 4) + "\">" +
           Escape(s.name) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

std::vector<std::pair<std::string, std::string>> ChartsFromSummary(
    const std::vector<SummaryRow>& summary, const std::string& description) {
  if (summary.empty()) throw std::invalid_argument("no results to chart");
  std::vector<std::string> workloads;
  for (const auto& r : summary) {
    if (std::find(workloads.begin(), workloads.end(), r.workload) == workloads.end()) {
      workloads.push_back(r.workload);
    }
  }
  std::vector<std::pair<std::string, std::string>> charts;
  for (const auto& workload : workloads) {
    std::set<double> eps;
    std::vector<std::string> domains;
    for (const auto& r : summary) {
      if (r.workload != workload) continue;
      eps.insert(r.epsilon);
      if (std::find(domains.begin(), domains.end(), r.domain) == domains.end()) {
        domains.push_back(r.domain);
      }
    }
    const bool sweep_eps = eps.size() > 1 || domains.size() == 1;
    LineChart chart;
    chart.description = description;
    chart.log_x = sweep_eps;
    if (sweep_eps) {
      chart.title = workload + ": mean relative error vs epsilon";
      chart.x_label = "epsilon (log scale)";
      chart.y_label = "mean relative error";
    } else {
      chart.title = workload + ": mean absolute error vs domain";
      chart.x_label = "domain setting";
      chart.y_label = "mean absolute error";
      chart.x_categories = domains;
    }
    const std::string metric = sweep_eps ? "rel_error" : "abs_error";
    for (const auto& r : summary) {
      if (r.workload != workload || r.metric != metric) continue;
      // Several domains in an epsilon sweep get one series each.
      const std::string name =
          sweep_eps && domains.size() > 1 ? r.mechanism + " " + r.domain : r.mechanism;
      auto it = std::find_if(chart.series.begin(), chart.series.end(),
                             [&](const ChartSeries& s) { return s.name == name; });
      if (it == chart.series.end()) {
        chart.series.push_back({name, {}});
        it = chart.series.end() - 1;
      }
      const double x = sweep_eps ? r.epsilon
                                 : static_cast<double>(std::find(domains.begin(), domains.end(),
                                                                 r.domain) -
                                                       domains.begin());
      it->points.emplace_back(x, r.mean);
    }
    for (auto& s : chart.series) std::sort(s.points.begin(), s.points.end());
    charts.emplace_back("chart_" + workload + ".svg", RenderSvg(chart));
  }
  return charts;
}

}  // namespace dpiov
