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

#ifndef DPIOV_METRICS_H_
#define DPIOV_METRICS_H_

#include <Eigen/Dense>

namespace dpiov {

// ||noisy - truth||_1. Throws std::invalid_argument on length mismatch.
double AbsoluteError(const Eigen::VectorXd& noisy, const Eigen::VectorXd& truth);

struct RelativeErrorResult {
  double value = 0;
  bool guarded = false;  // ||truth||_1 < 1, so the denominator was clamped to 1
};

// ||noisy - truth||_1 / max(||truth||_1, 1).
RelativeErrorResult RelativeError(const Eigen::VectorXd& noisy, const Eigen::VectorXd& truth);

}  // namespace dpiov

#endif  // DPIOV_METRICS_H_
