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

#include <bit>
#include <cmath>
#include <set>
#include <stdexcept>

#include "dpiov/format.h"
#include "dpiov/mechanisms.h"
#include "dpiov/transforms.h"

namespace dpiov {
namespace fourier {
namespace {

// Bit pattern of row `row` inside the marginal block over `attrs`.
std::uint64_t RowBits(const BinaryDomain& domain, const std::vector<int>& attrs,
                      Eigen::Index row) {
  std::uint64_t bits = 0;
  for (std::size_t i = attrs.size(); i-- > 0;) {
    const std::int64_t card = domain.base().cardinality(attrs[i]);
    bits |= static_cast<std::uint64_t>(row % card) << domain.bit_offset(attrs[i]);
    row /= card;
  }
  return bits;
}

}  // namespace

Eigen::VectorXd Coefficients(const BinaryDomain& domain, const Eigen::VectorXd& counts) {
  const std::int64_t n = domain.base().total_size();
  if (counts.size() != n) throw std::invalid_argument("counts do not match binary domain");
  Eigen::VectorXd by_bits(n);
  for (std::int64_t cell = 0; cell < n; ++cell) by_bits[domain.ToBits(cell)] = counts[cell];
  return WalshHadamard(by_bits) / static_cast<double>(n);
}

std::vector<std::uint64_t> RequiredCoefficients(const BinaryDomain& domain,
                                                const Workload& workload) {
  std::set<std::uint64_t> required;
  for (const auto& block : workload.marginals()) {
    const std::uint64_t mask = domain.AttributeMask(block.attributes);
    for (std::uint64_t alpha = mask;; alpha = (alpha - 1) & mask) {
      required.insert(alpha);
      if (alpha == 0) break;
    }
  }
  return {required.begin(), required.end()};
}

Eigen::VectorXd ReconstructMarginals(const BinaryDomain& domain, const Workload& workload,
                                     const Eigen::VectorXd& theta) {
  Eigen::VectorXd answers = Eigen::VectorXd::Zero(workload.num_queries());
  const int d = domain.num_bits();
  for (const auto& block : workload.marginals()) {
    const std::uint64_t mask = domain.AttributeMask(block.attributes);
    const double scale = std::ldexp(1.0, d - std::popcount(mask));
    for (Eigen::Index r = 0; r < block.num_rows; ++r) {
      const std::uint64_t beta = RowBits(domain, block.attributes, r);
      double sum = 0;
      for (std::uint64_t alpha = mask;; alpha = (alpha - 1) & mask) {
        const double value = theta[static_cast<Eigen::Index>(alpha)];
        sum += (std::popcount(alpha & beta) & 1) ? -value : value;
        if (alpha == 0) break;
      }
      answers[block.first_row + r] = scale * sum;
    }
  }
  return answers;
}

}  // namespace fourier

StrategyResult FourierMechanism(const Workload& workload, const DataVector& x,
                                const PrivacyParams& params, std::uint64_t seed) {
  params.Validate();
  if (!(x.domain() == workload.domain())) {
    throw std::invalid_argument("domain mismatch between workload and data");
  }
  if (!workload.IsMarginalUnion()) {
    throw std::invalid_argument("fourier needs a marginal workload, got " + workload.Name());
  }
  const BinaryDomain domain = Binarize(workload.domain());
  Eigen::VectorXd theta = fourier::Coefficients(domain, x.counts());
  const auto required = fourier::RequiredCoefficients(domain, workload);

  // A record moves every coefficient by 2^-d, so the required set has L1
  // sensitivity |A| * 2^-d.
  const double scale = static_cast<double>(required.size()) /
                       (std::ldexp(1.0, domain.num_bits()) * params.epsilon);
  if (params.noise_enabled) {
    Rng rng(seed);
    for (std::uint64_t alpha : required) {
      theta[static_cast<Eigen::Index>(alpha)] += SampleLaplace(scale, rng);
    }
  }

  StrategyResult result;
  result.strategy = Strategy::kFourier;
  result.epsilon = params.epsilon;
  result.seed = seed;
  result.noise_enabled = params.noise_enabled;
  result.answers = fourier::ReconstructMarginals(domain, workload, theta);
  result.measurements["coefficients"] = std::to_string(required.size());
  result.measurements["bits"] = std::to_string(domain.num_bits());
  result.measurements["scale"] = FormatDouble(scale);
  return result;
}

}  // namespace dpiov
