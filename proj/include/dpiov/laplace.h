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

#ifndef DPIOV_LAPLACE_H_
#define DPIOV_LAPLACE_H_

#include "dpiov/rng.h"

namespace dpiov {

// Inverse-CDF transform of u in (-1/2, 1/2) to Laplace(0, scale):
// -scale * sgn(u) * ln(1 - 2|u|).
double LaplaceFromUniform(double scale, double u);

// One Laplace(0, scale) draw. Throws std::invalid_argument unless scale > 0.
double SampleLaplace(double scale, Rng& rng);

struct PrivacyParams {
  double epsilon = 1.0;
  // false bypasses all noise. Only for reconstruction tests and
  // diagnostics; results produced this way are not private.
  bool noise_enabled = true;

  // Throws std::invalid_argument unless epsilon is finite and positive.
  void Validate() const;
};

}  // namespace dpiov

#endif  // DPIOV_LAPLACE_H_
