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

#ifndef DPIOV_MECHANISMS_H_
#define DPIOV_MECHANISMS_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "dpiov/domain.h"
#include "dpiov/laplace.h"
#include "dpiov/workload.h"

namespace dpiov {

enum class Strategy { kIdentity, kFourier, kWavelet, kDataCube, kHierarchical };

std::string_view StrategyName(Strategy s);
// Case-insensitive; throws std::invalid_argument on unknown names.
Strategy ParseStrategy(std::string_view name);

struct StrategyResult {
  Eigen::VectorXd answers;
  Strategy strategy = Strategy::kIdentity;
  double epsilon = 0;
  std::uint64_t seed = 0;
  bool noise_enabled = true;
  // Internal measurement description, e.g. {"coefficients", "11"}.
  std::map<std::string, std::string> measurements;

  // "key=value;key=value" in key order, prefixed by "NON-PRIVATE;" when
  // noise was disabled.
  std::string MeasurementsString() const;
};

struct WaveletOptions {
  // Dimensions with cardinality <= this stay in the identity basis.
  // 0 disables the hybrid rule.
  std::int64_t hybrid_threshold = 4;
};

struct HierarchicalOptions {
  // Least-squares consistency over the noisy tree before answering.
  bool consistency = false;
};

struct MechanismOptions {
  WaveletOptions wavelet;
  HierarchicalOptions hierarchical;
};

// Laplace mechanism on the workload answers, scale L1Sensitivity(W)/epsilon.
StrategyResult IdentityMechanism(const Workload& workload, const DataVector& x,
                                 const PrivacyParams& params, std::uint64_t seed);

// Noisy parity (Fourier) coefficients restricted to those the workload's
// marginals need; marginals are rebuilt from the noisy coefficients.
StrategyResult FourierMechanism(const Workload& workload, const DataVector& x,
                                const PrivacyParams& params, std::uint64_t seed);

// Haar wavelet per dimension with Privelet weights; small dimensions stay in
// the identity basis.
StrategyResult WaveletMechanism(const Workload& workload, const DataVector& x,
                                const PrivacyParams& params, std::uint64_t seed,
                                const WaveletOptions& options = {});

// Binary tree of interval sums over the flattened (row-major) cell vector.
StrategyResult HierarchicalMechanism(const Workload& workload, const DataVector& x,
                                     const PrivacyParams& params, std::uint64_t seed,
                                     const HierarchicalOptions& options = {});

// Measures a greedily chosen subset of the workload's own marginals and
// answers every workload marginal from a covering measured one.
StrategyResult DataCubeMechanism(const Workload& workload, const DataVector& x,
                                 const PrivacyParams& params, std::uint64_t seed);

StrategyResult RunMechanism(Strategy strategy, const Workload& workload,
                            const DataVector& x, const PrivacyParams& params,
                            std::uint64_t seed, const MechanismOptions& options = {});

// Throws std::invalid_argument when `strategy` cannot answer `workload`
// (non-marginal workloads for Fourier/DataCube, non power-of-two dimensions
// for Fourier, and for Wavelet on transformed dimensions).
void CheckCompatible(Strategy strategy, const Workload& workload,
                     const MechanismOptions& options = {});

namespace fourier {

// theta[alpha] = 2^-d * sum_x (-1)^{<alpha, bits(x)>} counts[x], indexed by alpha.
Eigen::VectorXd Coefficients(const BinaryDomain& domain, const Eigen::VectorXd& counts);

// Sorted union over workload marginals M of {alpha : alpha subset of bits(M)}.
std::vector<std::uint64_t> RequiredCoefficients(const BinaryDomain& domain,
                                                const Workload& workload);

// Answers of all workload rows from (possibly noisy) coefficients; entries of
// `theta` outside the required set are never read.
Eigen::VectorXd ReconstructMarginals(const BinaryDomain& domain, const Workload& workload,
                                     const Eigen::VectorXd& theta);

}  // namespace fourier

namespace wavelet {

struct Plan {
  std::vector<bool> haar;  // per dimension: Haar (true) or identity
  double generalized_sensitivity = 1.0;
};

Plan MakePlan(const Domain& domain, const WaveletOptions& options);

// Multi-dimensional transform over the row-major cell tensor.
Eigen::VectorXd Forward(const Domain& domain, const Plan& plan, const Eigen::VectorXd& cells);
Eigen::VectorXd Inverse(const Domain& domain, const Plan& plan, const Eigen::VectorXd& coeffs);
// Product of per-dimension Haar weights (1 on identity dimensions).
Eigen::VectorXd Weights(const Domain& domain, const Plan& plan);

}  // namespace wavelet

namespace hierarchical {

// ceil(log2 n) + 1: depth of the binary tree over n leaves.
int TreeLevels(std::int64_t n);

// Minimal set of heap-indexed tree nodes whose leaf intervals exactly tile
// [begin, end) in a tree with `leaves` (a power of two) leaves. Node 1 is the
// root; leaf i is node leaves + i.
std::vector<std::int64_t> DyadicCover(std::int64_t begin, std::int64_t end,
                                      std::int64_t leaves);

}  // namespace hierarchical

namespace datacube {

struct Selection {
  std::vector<std::vector<int>> chosen;  // sorted by (cells, lexicographic)
  double objective = 0;                  // max over workload marginals of variance
};

// Max over workload marginal sets of the smallest answering variance given
// that `chosen` are measured with Laplace(|chosen|/epsilon) per cell.
// +infinity if some marginal is not covered.
double Objective(const Domain& domain, const std::vector<std::vector<int>>& workload_sets,
                 const std::vector<std::vector<int>>& chosen, double epsilon);

// Distinct attribute sets of the workload's marginals, in first-seen order.
std::vector<std::vector<int>> WorkloadSets(const Workload& workload);

Selection SelectMarginals(const Workload& workload, double epsilon);

}  // namespace datacube

}  // namespace dpiov

#endif  // DPIOV_MECHANISMS_H_
