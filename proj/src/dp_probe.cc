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

#include "dpiov/dp_probe.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dpiov/rng.h"

namespace dpiov {

ProbeResult DpRatioProbe(const ScalarMechanism& mechanism, const DataVector& d1,
                         const DataVector& d2, int samples, int bins,
                         std::uint64_t seed, int min_count) {
  if (!(d1.domain() == d2.domain())) throw std::invalid_argument("probe inputs differ in domain");
  if ((d1.counts() - d2.counts()).lpNorm<1>() > 1.0 + 1e-12) {
    throw std::invalid_argument("probe inputs must differ by at most one record");
  }
  if (samples < 1 || bins < 1) throw std::invalid_argument("samples and bins must be positive");

  std::vector<double> out1(samples), out2(samples);
  for (int i = 0; i < samples; ++i) {
    out1[i] = mechanism(d1, StreamSeed(seed, 2 * static_cast<std::uint64_t>(i)));
    out2[i] = mechanism(d2, StreamSeed(seed, 2 * static_cast<std::uint64_t>(i) + 1));
  }

  std::vector<double> pooled(out1);
  pooled.insert(pooled.end(), out2.begin(), out2.end());
  std::sort(pooled.begin(), pooled.end());
  std::vector<double> edges;
  for (int b = 1; b < bins; ++b) {
    edges.push_back(pooled[pooled.size() * b / bins]);
  }
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  auto histogram = [&](const std::vector<double>& values) {
    std::vector<long> counts(edges.size() + 1, 0);
    for (double v : values) {
      counts[std::upper_bound(edges.begin(), edges.end(), v) - edges.begin()]++;
    }
    return counts;
  };
  const auto h1 = histogram(out1);
  const auto h2 = histogram(out2);

  ProbeResult result;
  for (std::size_t b = 0; b < h1.size(); ++b) {
    if ((h1[b] >= min_count && h2[b] == 0) || (h2[b] >= min_count && h1[b] == 0)) {
      result.unbounded = true;
    }
    if (h1[b] < min_count || h2[b] < min_count) continue;
    ++result.bins_used;
    result.max_log_ratio =
        std::max(result.max_log_ratio,
                 std::abs(std::log(static_cast<double>(h1[b]) / static_cast<double>(h2[b]))));
  }
  if (result.unbounded) {
    result.max_log_ratio = std::numeric_limits<double>::infinity();
    return result;
  }
  if (result.bins_used == 0) {
    throw std::runtime_error("probe: no bin has enough samples under both inputs");
  }
  return result;
}

}  // namespace dpiov
