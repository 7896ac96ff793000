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

#ifndef DPIOV_DP_PROBE_H_
#define DPIOV_DP_PROBE_H_

#include <cstdint>
#include <functional>

#include "dpiov/domain.h"

namespace dpiov {

// One scalar output of a randomized mechanism run on `x` with `seed`.
using ScalarMechanism = std::function<double(const DataVector& x, std::uint64_t seed)>;

struct ProbeResult {
  double max_log_ratio = 0;  // +infinity when unbounded
  int bins_used = 0;         // bins where both histograms reached min_count
  bool unbounded = false;    // some bin is populated under one input only
};

// Empirical check of the epsilon-DP inequality between neighbouring inputs.
// Both output distributions are histogrammed over shared equal-mass bins
// (quantiles of the pooled samples); the result is the largest
// |log(p1/p2)| over bins where both counts are >= min_count.
//
// Throws std::invalid_argument when d1 and d2 are not neighbours (L1
// distance of counts above 1), and std::runtime_error when no bin has
// enough samples.
ProbeResult DpRatioProbe(const ScalarMechanism& mechanism, const DataVector& d1,
                         const DataVector& d2, int samples, int bins,
                         std::uint64_t seed, int min_count = 50);

}  // namespace dpiov

#endif  // DPIOV_DP_PROBE_H_
