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

#include "dpiov/emulation/fleet.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "dpiov/laplace.h"

namespace dpiov {
namespace {

constexpr std::uint64_t kFleetStream = std::uint64_t{0xF1EE7} << 36;

}  // namespace

void FleetConfig::Validate() const {
  if (nodes < 1) throw std::invalid_argument("fleet needs at least one node");
  if (per_node < 2) throw std::invalid_argument("each node needs at least two records");
  if (feature_dim < 1 || classes < 1) throw std::invalid_argument("bad feature/class counts");
  if (heterogeneity < 0 || spread < 0) throw std::invalid_argument("heterogeneity must be >= 0");
}

nlohmann::json FleetConfig::ToJson() const {
  return {{"nodes", nodes},     {"per_node", per_node},
          {"feature_dim", feature_dim}, {"classes", classes},
          {"heterogeneity", heterogeneity}, {"spread", spread},
          {"seed", seed}};
}

FleetConfig FleetConfig::FromJson(const nlohmann::json& j) {
  FleetConfig c;
  c.nodes = j.at("nodes").get<int>();
  c.per_node = j.at("per_node").get<int>();
  c.feature_dim = j.at("feature_dim").get<int>();
  c.classes = j.at("classes").get<int>();
  c.heterogeneity = j.at("heterogeneity").get<double>();
  c.spread = j.at("spread").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

std::vector<NodeDataset> GenerateFleet(const FleetConfig& config) {
  config.Validate();
  const int p = config.feature_dim;
  // Kept apart from the pipeline's node-indexed noise streams.
  const std::uint64_t root = StreamSeed(config.seed, kFleetStream);
  Rng shared(StreamSeed(root, 0));
  Eigen::MatrixXd prototypes(config.classes, p);
  for (int c = 0; c < config.classes; ++c) {
    for (int j = 0; j < p; ++j) prototypes(c, j) = 0.3 + 0.4 * shared.Uniform();
  }

  std::vector<NodeDataset> fleet;
  for (int i = 0; i < config.nodes; ++i) {
    Rng rng(StreamSeed(root, static_cast<std::uint64_t>(i) + 1));
    std::normal_distribution<double> gauss(0.0, 1.0);
    // Node-specific class means: prototype + h * (random unit direction).
    Eigen::MatrixXd means = prototypes;
    for (int c = 0; c < config.classes; ++c) {
      Eigen::VectorXd dir(p);
      for (int j = 0; j < p; ++j) dir[j] = gauss(rng);
      if (dir.norm() > 0) dir.normalize();
      means.row(c) += config.heterogeneity * dir.transpose();
    }
    Eigen::MatrixXd features(config.per_node, p);
    std::vector<int> labels(static_cast<std::size_t>(config.per_node));
    for (int r = 0; r < config.per_node; ++r) {
      labels[r] = static_cast<int>(rng.UniformInt(static_cast<std::uint64_t>(config.classes)));
      for (int j = 0; j < p; ++j) {
        // Kept strictly inside (0,1) so any shared noisy copy differs from it.
        features(r, j) =
            std::clamp(means(labels[r], j) + config.spread * gauss(rng), 0.01, 0.99);
      }
    }
    const int train = std::max(1, config.per_node * 4 / 5);
    NodeDataset node;
    node.node_id = static_cast<std::uint32_t>(i);
    node.classes = config.classes;
    node.train.features = features.topRows(train);
    node.train.labels.assign(labels.begin(), labels.begin() + train);
    node.validation.features = features.bottomRows(config.per_node - train);
    node.validation.labels.assign(labels.begin() + train, labels.end());
    fleet.push_back(std::move(node));
  }
  return fleet;
}

Eigen::MatrixXd NoiseFeatures(const Eigen::MatrixXd& features, double epsilon, Rng& rng) {
  PrivacyParams{epsilon, true}.Validate();
  const double scale = 1.0 / epsilon;
  Eigen::MatrixXd out(features.rows(), features.cols());
  for (Eigen::Index r = 0; r < features.rows(); ++r) {
    for (Eigen::Index c = 0; c < features.cols(); ++c) {
      out(r, c) = std::clamp(features(r, c) + SampleLaplace(scale, rng), 0.0, 1.0);
    }
  }
  return out;
}

double KeepProbability(double epsilon, int classes) {
  if (classes <= 1) return 1.0;
  return 1.0 / (1.0 + (classes - 1) * std::exp(-epsilon));
}

std::vector<int> NoiseLabels(std::span<const int> labels, int classes, double epsilon, Rng& rng) {
  PrivacyParams{epsilon, true}.Validate();
  if (classes < 1) throw std::invalid_argument("classes must be >= 1");
  const double keep = KeepProbability(epsilon, classes);
  std::vector<int> out(labels.begin(), labels.end());
  if (classes == 1) return out;
  for (int& label : out) {
    if (rng.Bernoulli(keep)) continue;
    int other = static_cast<int>(rng.UniformInt(static_cast<std::uint64_t>(classes - 1)));
    if (other >= label) ++other;
    label = other;
  }
  return out;
}

LabeledData Concatenate(std::span<const LabeledData* const> parts) {
  Eigen::Index rows = 0, cols = 0;
  for (const auto* part : parts) {
    rows += part->size();
    cols = std::max(cols, part->features.cols());
  }
  LabeledData out;
  out.features.resize(rows, cols);
  Eigen::Index at = 0;
  for (const auto* part : parts) {
    if (part->size() == 0) continue;
    if (part->features.cols() != cols) throw std::invalid_argument("feature widths differ");
    out.features.middleRows(at, part->size()) = part->features;
    out.labels.insert(out.labels.end(), part->labels.begin(), part->labels.end());
    at += part->size();
  }
  return out;
}

}  // namespace dpiov
