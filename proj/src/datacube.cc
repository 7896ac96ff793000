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

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "dpiov/format.h"
#include "dpiov/mechanisms.h"

namespace dpiov {
namespace datacube {
namespace {

bool IsSubset(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Fewer cells first, then lexicographic attribute lists.
bool CheaperThan(const Domain& domain, const std::vector<int>& a, const std::vector<int>& b) {
  const auto ca = MarginalSize(domain, a);
  const auto cb = MarginalSize(domain, b);
  if (ca != cb) return ca < cb;
  return a < b;
}

std::string SetName(const Domain& domain, const std::vector<int>& attrs) {
  std::string out = "{";
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    if (i) out += '+';
    out += domain.attributes()[attrs[i]].name;
  }
  return out + "}";
}

}  // namespace

std::vector<std::vector<int>> WorkloadSets(const Workload& workload) {
  std::vector<std::vector<int>> sets;
  for (const auto& block : workload.marginals()) {
    if (std::find(sets.begin(), sets.end(), block.attributes) == sets.end()) {
      sets.push_back(block.attributes);
    }
  }
  return sets;
}

double Objective(const Domain& domain, const std::vector<std::vector<int>>& workload_sets,
                 const std::vector<std::vector<int>>& chosen, double epsilon) {
  const double scale = static_cast<double>(chosen.size()) / epsilon;
  double worst = 0;
  for (const auto& target : workload_sets) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& measured : chosen) {
      if (!IsSubset(target, measured)) continue;
      const double aggregated = static_cast<double>(MarginalSize(domain, measured)) /
                                static_cast<double>(MarginalSize(domain, target));
      best = std::min(best, 2.0 * scale * scale * aggregated);
    }
    worst = std::max(worst, best);
  }
  return worst;
}

Selection SelectMarginals(const Workload& workload, double epsilon) {
  if (!workload.IsMarginalUnion()) {
    throw std::invalid_argument("datacube needs a marginal workload, got " + workload.Name());
  }
  const Domain& domain = workload.domain();
  const auto sets = WorkloadSets(workload);

  // Maximal sets can only be answered from themselves.
  Selection selection;
  for (const auto& s : sets) {
    const bool dominated = std::any_of(sets.begin(), sets.end(), [&](const auto& other) {
      return other != s && IsSubset(s, other);
    });
    if (!dominated) selection.chosen.push_back(s);
  }
  selection.objective = Objective(domain, sets, selection.chosen, epsilon);

  while (true) {
    const std::vector<int>* best = nullptr;
    double best_objective = std::numeric_limits<double>::infinity();
    for (const auto& candidate : sets) {
      if (std::find(selection.chosen.begin(), selection.chosen.end(), candidate) !=
          selection.chosen.end()) {
        continue;
      }
      auto trial = selection.chosen;
      trial.push_back(candidate);
      const double objective = Objective(domain, sets, trial, epsilon);
      if (best == nullptr || objective < best_objective ||
          (objective == best_objective && CheaperThan(domain, candidate, *best))) {
        best = &candidate;
        best_objective = objective;
      }
    }
    if (best == nullptr || !(best_objective < selection.objective)) break;
    selection.chosen.push_back(*best);
    selection.objective = best_objective;
  }

  std::sort(selection.chosen.begin(), selection.chosen.end(),
            [&](const auto& a, const auto& b) { return CheaperThan(domain, a, b); });
  return selection;
}

}  // namespace datacube

StrategyResult DataCubeMechanism(const Workload& workload, const DataVector& x,
                                 const PrivacyParams& params, std::uint64_t seed) {
  params.Validate();
  if (!(x.domain() == workload.domain())) {
    throw std::invalid_argument("domain mismatch between workload and data");
  }
  const Domain& domain = workload.domain();
  const auto selection = datacube::SelectMarginals(workload, params.epsilon);

  // Sequential split: each measured marginal has sensitivity 1.
  const double scale = static_cast<double>(selection.chosen.size()) / params.epsilon;
  Rng rng(seed);
  std::vector<Eigen::VectorXd> measured;
  for (const auto& attrs : selection.chosen) {
    Eigen::VectorXd table = Eigen::VectorXd::Zero(MarginalSize(domain, attrs));
    for (std::int64_t cell = 0; cell < domain.total_size(); ++cell) {
      table[MarginalRowOf(domain, attrs, cell)] += x.counts()[cell];
    }
    if (params.noise_enabled) {
      for (Eigen::Index j = 0; j < table.size(); ++j) table[j] += SampleLaplace(scale, rng);
    }
    measured.push_back(std::move(table));
  }

  StrategyResult result;
  result.strategy = Strategy::kDataCube;
  result.epsilon = params.epsilon;
  result.seed = seed;
  result.noise_enabled = params.noise_enabled;
  result.answers = Eigen::VectorXd::Zero(workload.num_queries());

  for (const auto& block : workload.marginals()) {
    // chosen is sorted cheapest first, so the first cover is the best one.
    std::size_t source = 0;
    while (!std::includes(selection.chosen[source].begin(), selection.chosen[source].end(),
                          block.attributes.begin(), block.attributes.end())) {
      ++source;
    }
    const auto& attrs = selection.chosen[source];
    const auto& table = measured[source];
    std::vector<std::int64_t> values(attrs.size());
    for (Eigen::Index j = 0; j < table.size(); ++j) {
      std::int64_t rest = j;
      for (std::size_t i = attrs.size(); i-- > 0;) {
        values[i] = rest % domain.cardinality(attrs[i]);
        rest /= domain.cardinality(attrs[i]);
      }
      Eigen::Index row = 0;
      for (int a : block.attributes) {
        const auto pos = std::find(attrs.begin(), attrs.end(), a) - attrs.begin();
        row = row * domain.cardinality(a) + values[pos];
      }
      result.answers[block.first_row + row] += table[j];
    }
  }

  std::string chosen;
  for (std::size_t i = 0; i < selection.chosen.size(); ++i) {
    if (i) chosen += '|';
    chosen += datacube::SetName(domain, selection.chosen[i]);
  }
  result.measurements["chosen"] = chosen;
  result.measurements["measured_marginals"] = std::to_string(selection.chosen.size());
  result.measurements["cell_scale"] = FormatDouble(scale);
  return result;
}

}  // namespace dpiov
