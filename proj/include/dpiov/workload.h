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

#ifndef DPIOV_WORKLOAD_H_
#define DPIOV_WORKLOAD_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "dpiov/domain.h"

namespace dpiov {

using QueryMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

enum class WorkloadKind { kAllRange, kKWayMarginal, kCustom };

// A contiguous block of workload rows that together form the marginal over
// `attributes` (sorted attribute indices). Rows inside the block follow the
// row-major order of the value tuples over those attributes. The empty
// attribute set is the 0-way marginal, i.e. the total count.
struct MarginalBlock {
  std::vector<int> attributes;
  Eigen::Index first_row = 0;
  Eigen::Index num_rows = 0;
};

class Workload {
 public:
  // Arbitrary linear queries; no marginal structure is assumed.
  static Workload Custom(Domain domain, QueryMatrix matrix);

  // `marginals`, when non-empty, must describe every row of `matrix`.
  Workload(Domain domain, QueryMatrix matrix, WorkloadKind kind, int k,
           std::vector<MarginalBlock> marginals);

  const Domain& domain() const { return domain_; }
  const QueryMatrix& matrix() const { return matrix_; }
  WorkloadKind kind() const { return kind_; }
  // k of a KWayMarginal workload, 0 otherwise.
  int k() const { return k_; }
  Eigen::Index num_queries() const { return matrix_.rows(); }

  // Non-empty iff every row belongs to some marginal block.
  const std::vector<MarginalBlock>& marginals() const { return marginals_; }
  bool IsMarginalUnion() const { return !marginals_.empty(); }

  // "all_range", "1way_marginal", "marginals", "custom".
  std::string Name() const;

 private:
  Domain domain_;
  QueryMatrix matrix_;
  WorkloadKind kind_;
  int k_ = 0;
  std::vector<MarginalBlock> marginals_;
};

Workload AllRange(const Domain& domain);

// All k-way marginals. Attribute subsets appear in lexicographic order,
// value tuples in row-major order within each subset.
Workload KWayMarginal(const Domain& domain, int k);

// Union of the marginals over the given attribute subsets, in the given order.
Workload MarginalWorkload(const Domain& domain,
                          const std::vector<std::vector<int>>& subsets);

// Row of the marginal over `attributes` (sorted) that contains `cell`,
// relative to the start of that marginal's block.
Eigen::Index MarginalRowOf(const Domain& domain, const std::vector<int>& attributes,
                           std::int64_t cell);

// Number of cells of the marginal table over `attributes`.
std::int64_t MarginalSize(const Domain& domain, const std::vector<int>& attributes);

Eigen::VectorXd Evaluate(const Workload& workload, const DataVector& x);
// Evaluates on a raw cell vector (possibly with negative entries, e.g. a
// reconstructed noisy estimate).
Eigen::VectorXd Evaluate(const Workload& workload, const Eigen::VectorXd& cells);

// Largest column L1 norm: the most any single record can move the answers.
double L1Sensitivity(const Workload& workload);

// Debug dump: "row,cell,weight" lines after a header.
void WriteSparseTriples(const Workload& workload, std::ostream& out);

// All size-k subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> Combinations(int n, int k);

}  // namespace dpiov

#endif  // DPIOV_WORKLOAD_H_
