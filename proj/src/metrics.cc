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

#include "dpiov/metrics.h"

#include <algorithm>
#include <stdexcept>

namespace dpiov {

double AbsoluteError(const Eigen::VectorXd& noisy, const Eigen::VectorXd& truth) {
  if (noisy.size() != truth.size()) {
    throw std::invalid_argument("error metric: answer vectors differ in length");
  }
  return (noisy - truth).lpNorm<1>();
}

RelativeErrorResult RelativeError(const Eigen::VectorXd& noisy, const Eigen::VectorXd& truth) {
  const double abs_error = AbsoluteError(noisy, truth);
  const double magnitude = truth.lpNorm<1>();
  return {abs_error / std::max(magnitude, 1.0), magnitude < 1.0};
}

}  // namespace dpiov
