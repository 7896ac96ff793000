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

#ifndef DPIOV_EMULATION_PIPELINE_H_
#define DPIOV_EMULATION_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dpiov/emulation/fleet.h"
#include "dpiov/emulation/predictor.h"
#include "json.hpp"

namespace dpiov {

// GDP: nodes ship raw records, the aggregator noises the pooled set and
// trains one model. LDP: every node noises and trains on its own records.
enum class SharingMode { kGdp, kLdp };

std::string_view ModeName(SharingMode mode);
SharingMode ParseMode(std::string_view name);

struct PipelineConfig {
  double eps_image = 1.0;
  std::optional<double> eps_text;  // label randomized response when set
  std::uint64_t seed = 1;
  TrainOptions train;

  void Validate() const;
  nlohmann::json ToJson() const;
  static PipelineConfig FromJson(const nlohmann::json& j);
};

struct NodeAccuracy {
  std::uint32_t node_id = 0;
  double accuracy = 0;

  friend bool operator==(const NodeAccuracy&, const NodeAccuracy&) = default;
};

struct PipelineReport {
  SharingMode mode = SharingMode::kGdp;
  double eps_image = 0;
  std::optional<double> eps_text;
  std::vector<NodeAccuracy> nodes;  // ascending node_id
  double mean_accuracy = 0;
  std::uint64_t seed = 0;

  nlohmann::json ToJson() const;
  static PipelineReport FromJson(const nlohmann::json& j);
  friend bool operator==(const PipelineReport&, const PipelineReport&) = default;
};

// Node-side privatisation used by LDP: features via NoiseFeatures, labels via
// randomized response when eps_text is set. Stream depends on node_id only.
LabeledData PrivatizeOnNode(const LabeledData& train, int classes, std::uint32_t node_id,
                            const PipelineConfig& config);

// Raw records received from one node.
struct NodePayload {
  std::uint32_t node_id = 0;
  const LabeledData* data = nullptr;
};

// Aggregator-side GDP step: pool `parts` in node_id order, noise the pooled
// records and train the global model. Each node's block is noised from the
// same stream the node would use under LDP, so both modes see identical
// noisy records and differ only in where training happens.
LinearClassifier TrainGlobalModel(std::vector<NodePayload> parts, int classes,
                                  const PipelineConfig& config);

// LDP node step: privatise, train locally, score on clean validation data.
double RunLocalNode(const NodeDataset& node, const PipelineConfig& config,
                    LabeledData* shared = nullptr);

// Sorts by node_id and fills in the mean. Throws on duplicate node ids.
PipelineReport MakeReport(SharingMode mode, const PipelineConfig& config,
                          std::vector<NodeAccuracy> nodes);

PipelineReport GdpPipeline(std::span<const NodeDataset> nodes, const PipelineConfig& config);
PipelineReport LdpPipeline(std::span<const NodeDataset> nodes, const PipelineConfig& config);
PipelineReport RunPipeline(SharingMode mode, std::span<const NodeDataset> nodes,
                           const PipelineConfig& config);

}  // namespace dpiov

#endif  // DPIOV_EMULATION_PIPELINE_H_
