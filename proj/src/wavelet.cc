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

#include <cmath>
#include <stdexcept>
#include <string>

#include "dpiov/format.h"
#include "dpiov/mechanisms.h"
#include "dpiov/transforms.h"

namespace dpiov {
namespace wavelet {
namespace {

// Applies `fn` to every 1-D fiber of the row-major tensor along `axis`.
template <typename Fn>
void ForEachFiber(const Domain& domain, std::size_t axis, Eigen::VectorXd& data, Fn fn) {
  const std::int64_t len = domain.cardinality(axis);
  std::int64_t inner = 1;
  for (std::size_t j = axis + 1; j < domain.num_attributes(); ++j) inner *= domain.cardinality(j);
  const std::int64_t outer = domain.total_size() / (len * inner);
  Eigen::VectorXd fiber(len);
  for (std::int64_t o = 0; o < outer; ++o) {
    for (std::int64_t i = 0; i < inner; ++i) {
      const std::int64_t base = o * len * inner + i;
      for (std::int64_t t = 0; t < len; ++t) fiber[t] = data[base + t * inner];
      fiber = fn(fiber);
      for (std::int64_t t = 0; t < len; ++t) data[base + t * inner] = fiber[t];
    }
  }
}

}  // namespace

Plan MakePlan(const Domain& domain, const WaveletOptions& options) {
  Plan plan;
  for (const auto& attr : domain.attributes()) {
    const bool haar = options.hybrid_threshold <= 0 || attr.cardinality > options.hybrid_threshold;
    if (haar && !IsPowerOfTwo(attr.cardinality)) {
      throw std::invalid_argument("wavelet needs a power-of-two cardinality on transformed "
                                  "dimension '" + attr.name + "' (" +
                                  std::to_string(attr.cardinality) + ")");
    }
    plan.haar.push_back(haar);
    if (haar) plan.generalized_sensitivity *= 1.0 + std::log2(static_cast<double>(attr.cardinality));
  }
  return plan;
}

Eigen::VectorXd Forward(const Domain& domain, const Plan& plan, const Eigen::VectorXd& cells) {
  Eigen::VectorXd data = cells;
  for (std::size_t a = 0; a < plan.haar.size(); ++a) {
    if (!plan.haar[a]) continue;
    ForEachFiber(domain, a, data, [](const Eigen::VectorXd& f) { return HaarForward(f); });
  }
  return data;
}

Eigen::VectorXd Inverse(const Domain& domain, const Plan& plan, const Eigen::VectorXd& coeffs) {
  Eigen::VectorXd data = coeffs;
  for (std::size_t a = plan.haar.size(); a-- > 0;) {
    if (!plan.haar[a]) continue;
    ForEachFiber(domain, a, data, [](const Eigen::VectorXd& f) { return HaarInverse(f); });
  }
  return data;
}

Eigen::VectorXd Weights(const Domain& domain, const Plan& plan) {
  Eigen::VectorXd weights = Eigen::VectorXd::Ones(domain.total_size());
  for (std::size_t a = 0; a < plan.haar.size(); ++a) {
    if (!plan.haar[a]) continue;
    const std::int64_t m = domain.cardinality(a);
    ForEachFiber(domain, a, weights, [m](const Eigen::VectorXd& f) {
      Eigen::VectorXd out = f;
      for (Eigen::Index t = 0; t < f.size(); ++t) out[t] *= HaarWeight(m, t);
      return out;
    });
  }
  return weights;
}

}  // namespace wavelet

StrategyResult WaveletMechanism(const Workload& workload, const DataVector& x,
                                const PrivacyParams& params, std::uint64_t seed,
                                const WaveletOptions& options) {
  params.Validate();
  if (!(x.domain() == workload.domain())) {
    throw std::invalid_argument("domain mismatch between workload and data");
  }
  const Domain& domain = workload.domain();
  const wavelet::Plan plan = wavelet::MakePlan(domain, options);
  Eigen::VectorXd coeffs = wavelet::Forward(domain, plan, x.counts());

  if (params.noise_enabled) {
    const Eigen::VectorXd weights = wavelet::Weights(domain, plan);
    Rng rng(seed);
    for (Eigen::Index c = 0; c < coeffs.size(); ++c) {
      coeffs[c] += SampleLaplace(plan.generalized_sensitivity / (weights[c] * params.epsilon), rng);
    }
  }

  StrategyResult result;
  result.strategy = Strategy::kWavelet;
  result.epsilon = params.epsilon;
  result.seed = seed;
  result.noise_enabled = params.noise_enabled;
  result.answers = Evaluate(workload, wavelet::Inverse(domain, plan, coeffs));

  std::string bases;
  for (std::size_t a = 0; a < plan.haar.size(); ++a) {
    if (a) bases += '|';
    bases += domain.attributes()[a].name + ":" + (plan.haar[a] ? "haar" : "identity");
  }
  result.measurements["bases"] = bases;
  result.measurements["hybrid_threshold"] = std::to_string(options.hybrid_threshold);
  result.measurements["generalized_sensitivity"] = FormatDouble(plan.generalized_sensitivity);
  return result;
}

}  // namespace dpiov
