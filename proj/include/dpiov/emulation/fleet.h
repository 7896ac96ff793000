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

#ifndef DPIOV_EMULATION_FLEET_H_
#define DPIOV_EMULATION_FLEET_H_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dpiov/rng.h"
#include "json.hpp"

namespace dpiov {

// Synthetic stand-in for per-vehicle training data: feature rows in [0,1]
// (image-like inputs) and categorical labels (statistics bands).
struct FleetConfig {
  int nodes = 10;
  int per_node = 100;        // records per node before the 80/20 split
  int feature_dim = 16;
  int classes = 4;
  double heterogeneity = 1.0;   // magnitude of per-node class-mean shifts
  double spread = 0.08;         // within-cluster standard deviation
  std::uint64_t seed = 1;

  void Validate() const;
  nlohmann::json ToJson() const;
  static FleetConfig FromJson(const nlohmann::json& j);
};

struct LabeledData {
  Eigen::MatrixXd features;  // one record per row
  std::vector<int> labels;

  Eigen::Index size() const { return features.rows(); }
};

struct NodeDataset {
  std::uint32_t node_id = 0;
  int classes = 1;
  LabeledData train;
  LabeledData validation;
};

// Class clusters shared by the fleet, each shifted per node by a random
// vector of magnitude `heterogeneity`. Deterministic given the config.
std::vector<NodeDataset> GenerateFleet(const FleetConfig& config);

// Each entry plus Laplace(1/epsilon), clamped to [0,1].
Eigen::MatrixXd NoiseFeatures(const Eigen::MatrixXd& features, double epsilon, Rng& rng);

// Probability that k-ary randomized response keeps the true label:
// e^eps / (e^eps + k - 1).
double KeepProbability(double epsilon, int classes);

// k-ary randomized response: keep with KeepProbability, otherwise a uniform
// choice among the other k - 1 classes.
std::vector<int> NoiseLabels(std::span<const int> labels, int classes, double epsilon, Rng& rng);

// Row-wise concatenation in the given order.
LabeledData Concatenate(std::span<const LabeledData* const> parts);

}  // namespace dpiov

#endif  // DPIOV_EMULATION_FLEET_H_
