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

#include "dpiov/workload.h"

#include <ostream>
#include <stdexcept>

namespace dpiov {

Workload::Workload(Domain domain, QueryMatrix matrix, WorkloadKind kind, int k,
                   std::vector<MarginalBlock> marginals)
    : domain_(std::move(domain)),
      matrix_(std::move(matrix)),
      kind_(kind),
      k_(k),
      marginals_(std::move(marginals)) {
  if (matrix_.cols() != domain_.total_size()) {
    throw std::invalid_argument("workload has " + std::to_string(matrix_.cols()) +
                                " columns, domain has " +
                                std::to_string(domain_.total_size()) + " cells");
  }
  matrix_.makeCompressed();
}

Workload Workload::Custom(Domain domain, QueryMatrix matrix) {
  return Workload(std::move(domain), std::move(matrix), WorkloadKind::kCustom, 0, {});
}

std::string Workload::Name() const {
  switch (kind_) {
    case WorkloadKind::kAllRange:
      return "all_range";
    case WorkloadKind::kKWayMarginal:
      return std::to_string(k_) + "way_marginal";
    case WorkloadKind::kCustom:
      return IsMarginalUnion() ? "marginals" : "custom";
  }
  return "custom";
}

std::vector<std::vector<int>> Combinations(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> current(k);
  for (int i = 0; i < k; ++i) current[i] = i;
  while (true) {
    out.push_back(current);
    int i = k - 1;
    while (i >= 0 && current[i] == n - k + i) --i;
    if (i < 0) break;
    ++current[i];
    for (int j = i + 1; j < k; ++j) current[j] = current[j - 1] + 1;
  }
  return out;
}

std::int64_t MarginalSize(const Domain& domain, const std::vector<int>& attributes) {
  std::int64_t size = 1;
  for (int a : attributes) size *= domain.cardinality(a);
  return size;
}

Eigen::Index MarginalRowOf(const Domain& domain, const std::vector<int>& attributes,
                           std::int64_t cell) {
  const auto coords = domain.Coordinates(cell);
  Eigen::Index row = 0;
  for (int a : attributes) row = row * domain.cardinality(a) + coords[a];
  return row;
}

namespace {

Workload BuildMarginals(const Domain& domain,
                        const std::vector<std::vector<int>>& subsets,
                        WorkloadKind kind, int k) {
  std::vector<MarginalBlock> blocks;
  Eigen::Index rows = 0;
  for (const auto& subset : subsets) {
    for (std::size_t i = 0; i < subset.size(); ++i) {
      if (subset[i] < 0 || subset[i] >= static_cast<int>(domain.num_attributes()) ||
          (i > 0 && subset[i] <= subset[i - 1])) {
        throw std::invalid_argument("marginal attributes must be sorted, distinct and in range");
      }
    }
    const auto size = MarginalSize(domain, subset);
    blocks.push_back({subset, rows, size});
    rows += size;
  }
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(domain.total_size()) * blocks.size());
  for (const auto& block : blocks) {
    for (std::int64_t cell = 0; cell < domain.total_size(); ++cell) {
      triplets.emplace_back(block.first_row + MarginalRowOf(domain, block.attributes, cell),
                            cell, 1.0);
    }
  }
  QueryMatrix matrix(rows, domain.total_size());
  matrix.setFromTriplets(triplets.begin(), triplets.end());
  return Workload(domain, std::move(matrix), kind, k, std::move(blocks));
}

}  // namespace

Workload AllRange(const Domain& domain) {
  return BuildMarginals(domain, {{}}, WorkloadKind::kAllRange, 0);
}

Workload KWayMarginal(const Domain& domain, int k) {
  const int n = static_cast<int>(domain.num_attributes());
  if (k < 1 || k > n) {
    throw std::invalid_argument("k-way marginal needs 1 <= k <= " + std::to_string(n) +
                                ", got k=" + std::to_string(k));
  }
  return BuildMarginals(domain, Combinations(n, k), WorkloadKind::kKWayMarginal, k);
}

Workload MarginalWorkload(const Domain& domain,
                          const std::vector<std::vector<int>>& subsets) {
  if (subsets.empty()) throw std::invalid_argument("no marginals given");
  return BuildMarginals(domain, subsets, WorkloadKind::kCustom, 0);
}

Eigen::VectorXd Evaluate(const Workload& workload, const Eigen::VectorXd& cells) {
  if (cells.size() != workload.domain().total_size()) {
    throw std::invalid_argument("cell vector does not match workload domain");
  }
  return workload.matrix() * cells;
}

Eigen::VectorXd Evaluate(const Workload& workload, const DataVector& x) {
  if (!(x.domain() == workload.domain())) {
    throw std::invalid_argument("domain mismatch: workload over " +
                                workload.domain().Label() + ", data over " +
                                x.domain().Label());
  }
  return workload.matrix() * x.counts();
}

double L1Sensitivity(const Workload& workload) {
  const auto& m = workload.matrix();
  Eigen::VectorXd column_norms = Eigen::VectorXd::Zero(m.cols());
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    for (QueryMatrix::InnerIterator it(m, r); it; ++it) {
      column_norms[it.col()] += std::abs(it.value());
    }
  }
  return column_norms.size() == 0 || m.rows() == 0 ? 0.0 : column_norms.maxCoeff();
}

void WriteSparseTriples(const Workload& workload, std::ostream& out) {
  out << "row,cell,weight\n";
  const auto& m = workload.matrix();
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    for (QueryMatrix::InnerIterator it(m, r); it; ++it) {
      out << r << ',' << it.col() << ',' << it.value() << '\n';
    }
  }
}

}  // namespace dpiov
