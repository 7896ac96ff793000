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
#include <stdexcept>

#include "dpiov/format.h"
#include "dpiov/mechanisms.h"

namespace dpiov {
namespace hierarchical {

int TreeLevels(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("tree needs at least one leaf");
  int levels = 1;
  for (std::int64_t width = 1; width < n; width *= 2) ++levels;
  return levels;
}

std::vector<std::int64_t> DyadicCover(std::int64_t begin, std::int64_t end,
                                      std::int64_t leaves) {
  if (begin < 0 || end > leaves || begin > end) {
    throw std::out_of_range("interval outside the tree");
  }
  std::vector<std::int64_t> nodes;
  for (std::int64_t lo = begin + leaves, hi = end + leaves; lo < hi; lo /= 2, hi /= 2) {
    if (lo & 1) nodes.push_back(lo++);
    if (hi & 1) nodes.push_back(--hi);
  }
  std::sort(nodes.begin(), nodes.end());
  return nodes;
}

namespace {

// Hay et al. style least-squares consistency for a binary tree stored in
// heap order (nodes 1 .. 2*leaves-1).
Eigen::VectorXd MakeConsistent(const Eigen::VectorXd& noisy, std::int64_t leaves) {
  const std::int64_t nodes = 2 * leaves;
  Eigen::VectorXd z = noisy;
  Eigen::VectorXd height = Eigen::VectorXd::Ones(nodes);
  for (std::int64_t v = leaves - 1; v >= 1; --v) {
    height[v] = height[2 * v] + 1;
    const double p = std::ldexp(1.0, static_cast<int>(height[v]));
    const double children = z[2 * v] + z[2 * v + 1];
    z[v] = ((p - p / 2) * noisy[v] + (p / 2 - 1) * children) / (p - 1);
  }
  Eigen::VectorXd out = z;
  for (std::int64_t v = 2; v < nodes; ++v) {
    const std::int64_t parent = v / 2;
    out[v] = z[v] + 0.5 * (out[parent] - z[2 * parent] - z[2 * parent + 1]);
  }
  return out;
}

}  // namespace
}  // namespace hierarchical

StrategyResult HierarchicalMechanism(const Workload& workload, const DataVector& x,
                                     const PrivacyParams& params, std::uint64_t seed,
                                     const HierarchicalOptions& options) {
  params.Validate();
  if (!(x.domain() == workload.domain())) {
    throw std::invalid_argument("domain mismatch between workload and data");
  }
  const std::int64_t n = x.domain().total_size();
  const int levels = hierarchical::TreeLevels(n);
  const std::int64_t leaves = std::int64_t{1} << (levels - 1);

  // Heap-ordered interval sums; padded leaves hold zero.
  Eigen::VectorXd tree = Eigen::VectorXd::Zero(2 * leaves);
  tree.segment(leaves, n) = x.counts();
  for (std::int64_t v = leaves - 1; v >= 1; --v) tree[v] = tree[2 * v] + tree[2 * v + 1];

  // Each record sits under one node per level.
  const double scale = levels / params.epsilon;
  if (params.noise_enabled) {
    Rng rng(seed);
    for (std::int64_t v = 1; v < 2 * leaves; ++v) tree[v] += SampleLaplace(scale, rng);
    if (options.consistency) tree = hierarchical::MakeConsistent(tree, leaves);
  }

  StrategyResult result;
  result.strategy = Strategy::kHierarchical;
  result.epsilon = params.epsilon;
  result.seed = seed;
  result.noise_enabled = params.noise_enabled;
  result.answers = Eigen::VectorXd::Zero(workload.num_queries());

  std::size_t max_cover = 0;
  const auto& m = workload.matrix();
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    double answer = 0;
    std::size_t cover = 0;
    QueryMatrix::InnerIterator it(m, r);
    while (it) {
      // Maximal run of adjacent cells sharing one weight.
      const std::int64_t begin = it.col();
      const double weight = it.value();
      std::int64_t end = begin + 1;
      ++it;
      while (it && it.col() == end && it.value() == weight) {
        ++end;
        ++it;
      }
      for (std::int64_t node : hierarchical::DyadicCover(begin, end, leaves)) {
        answer += weight * tree[node];
        ++cover;
      }
    }
    result.answers[r] = answer;
    max_cover = std::max(max_cover, cover);
  }

  result.measurements["levels"] = std::to_string(levels);
  result.measurements["padded_cells"] = std::to_string(leaves - n);
  result.measurements["max_cover"] = std::to_string(max_cover);
  result.measurements["node_scale"] = FormatDouble(scale);
  result.measurements["consistency"] = options.consistency ? "on" : "off";
  return result;
}

}  // namespace dpiov
