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

#include "dpiov/laplace.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dpiov {

double LaplaceFromUniform(double scale, double u) {
  if (u == 0.0) return 0.0;
  const double magnitude = -scale * std::log1p(-2.0 * std::abs(u));
  return u > 0 ? magnitude : -magnitude;
}

double SampleLaplace(double scale, Rng& rng) {
  if (!(scale > 0) || !std::isfinite(scale)) {
    throw std::invalid_argument("Laplace scale must be positive, got " +
                                std::to_string(scale));
  }
  return LaplaceFromUniform(scale, rng.UniformOpen() - 0.5);
}

void PrivacyParams::Validate() const {
  if (!(epsilon > 0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be positive, got " + std::to_string(epsilon));
  }
}

}  // namespace dpiov
