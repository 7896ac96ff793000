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

#include "dpiov/mechanisms.h"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "dpiov/format.h"

namespace dpiov {

std::string_view StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kIdentity:
      return "identity";
    case Strategy::kFourier:
      return "fourier";
    case Strategy::kWavelet:
      return "wavelet";
    case Strategy::kDataCube:
      return "datacube";
    case Strategy::kHierarchical:
      return "hierarchical";
  }
  return "unknown";
}

Strategy ParseStrategy(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (Strategy s : {Strategy::kIdentity, Strategy::kFourier, Strategy::kWavelet,
                     Strategy::kDataCube, Strategy::kHierarchical}) {
    if (lower == StrategyName(s)) return s;
  }
  throw std::invalid_argument("unknown mechanism '" + std::string(name) + "'");
}

std::string StrategyResult::MeasurementsString() const {
  std::string out = noise_enabled ? "" : "NON-PRIVATE;";
  bool first = true;
  for (const auto& [key, value] : measurements) {
    if (!first) out += ';';
    out += key + "=" + value;
    first = false;
  }
  return out;
}

StrategyResult IdentityMechanism(const Workload& workload, const DataVector& x,
                                 const PrivacyParams& params, std::uint64_t seed) {
  params.Validate();
  StrategyResult result;
  result.strategy = Strategy::kIdentity;
  result.epsilon = params.epsilon;
  result.seed = seed;
  result.noise_enabled = params.noise_enabled;
  result.answers = Evaluate(workload, x);

  const double sensitivity = L1Sensitivity(workload);
  const double scale = sensitivity / params.epsilon;
  result.measurements["sensitivity"] = FormatDouble(sensitivity);
  result.measurements["scale"] = FormatDouble(scale);
  if (params.noise_enabled && sensitivity > 0) {
    Rng rng(seed);
    for (Eigen::Index q = 0; q < result.answers.size(); ++q) {
      result.answers[q] += SampleLaplace(scale, rng);
    }
  }
  return result;
}

void CheckCompatible(Strategy strategy, const Workload& workload,
                     const MechanismOptions& options) {
  switch (strategy) {
    case Strategy::kIdentity:
    case Strategy::kHierarchical:
      return;
    case Strategy::kFourier:
      if (!workload.IsMarginalUnion()) {
        throw std::invalid_argument("fourier needs a marginal workload, got " + workload.Name());
      }
      Binarize(workload.domain());
      return;
    case Strategy::kDataCube:
      if (!workload.IsMarginalUnion()) {
        throw std::invalid_argument("datacube needs a marginal workload, got " +
                                    workload.Name());
      }
      return;
    case Strategy::kWavelet:
      wavelet::MakePlan(workload.domain(), options.wavelet);
      return;
  }
}

StrategyResult RunMechanism(Strategy strategy, const Workload& workload,
                            const DataVector& x, const PrivacyParams& params,
                            std::uint64_t seed, const MechanismOptions& options) {
  switch (strategy) {
    case Strategy::kIdentity:
      return IdentityMechanism(workload, x, params, seed);
    case Strategy::kFourier:
      return FourierMechanism(workload, x, params, seed);
    case Strategy::kWavelet:
      return WaveletMechanism(workload, x, params, seed, options.wavelet);
    case Strategy::kDataCube:
      return DataCubeMechanism(workload, x, params, seed);
    case Strategy::kHierarchical:
      return HierarchicalMechanism(workload, x, params, seed, options.hierarchical);
  }
  throw std::invalid_argument("unknown strategy");
}

}  // namespace dpiov
