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

#include "dpiov/emulation/pipeline.h"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "dpiov/laplace.h"
#include "dpiov/rng.h"

namespace dpiov {
namespace {

// Node noise streams use the node id directly; training uses this one.
constexpr std::uint64_t kTrainStream = std::uint64_t{1} << 41;

TrainOptions SeededTraining(const PipelineConfig& config) {
  TrainOptions train = config.train;
  train.seed = StreamSeed(config.seed, kTrainStream);
  return train;
}

void CheckUniqueIds(std::span<const NodeDataset> nodes) {
  std::vector<std::uint32_t> ids;
  for (const auto& n : nodes) ids.push_back(n.node_id);
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw std::invalid_argument("duplicate node_id in fleet");
  }
}

}  // namespace

std::string_view ModeName(SharingMode mode) {
  return mode == SharingMode::kGdp ? "gdp" : "ldp";
}

SharingMode ParseMode(std::string_view name) {
  if (name == "gdp" || name == "GDP") return SharingMode::kGdp;
  if (name == "ldp" || name == "LDP") return SharingMode::kLdp;
  throw std::invalid_argument("unknown mode '" + std::string(name) + "' (expected gdp or ldp)");
}

void PipelineConfig::Validate() const {
  PrivacyParams{eps_image, true}.Validate();
  if (eps_text) PrivacyParams{*eps_text, true}.Validate();
}

nlohmann::json PipelineConfig::ToJson() const {
  nlohmann::json j = {{"eps_image", eps_image},
                      {"eps_text", eps_text ? nlohmann::json(*eps_text) : nlohmann::json()},
                      {"seed", seed},
                      {"epochs", train.epochs},
                      {"step", train.step},
                      {"l2", train.l2},
                      {"init_scale", train.init_scale}};
  return j;
}

PipelineConfig PipelineConfig::FromJson(const nlohmann::json& j) {
  PipelineConfig c;
  c.eps_image = j.at("eps_image").get<double>();
  if (j.contains("eps_text") && !j["eps_text"].is_null()) c.eps_text = j["eps_text"].get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.train.epochs = j.at("epochs").get<int>();
  c.train.step = j.at("step").get<double>();
  c.train.l2 = j.at("l2").get<double>();
  c.train.init_scale = j.at("init_scale").get<double>();
  return c;
}

nlohmann::json PipelineReport::ToJson() const {
  nlohmann::json per_node = nlohmann::json::array();
  for (const auto& n : nodes) per_node.push_back({{"node_id", n.node_id}, {"accuracy", n.accuracy}});
  return {{"mode", ModeName(mode)},
          {"eps_image", eps_image},
          {"eps_text", eps_text ? nlohmann::json(*eps_text) : nlohmann::json()},
          {"nodes", per_node},
          {"mean_accuracy", mean_accuracy},
          {"seed", seed}};
}

PipelineReport PipelineReport::FromJson(const nlohmann::json& j) {
  PipelineReport r;
  r.mode = ParseMode(j.at("mode").get<std::string>());
  r.eps_image = j.at("eps_image").get<double>();
  if (j.contains("eps_text") && !j["eps_text"].is_null()) r.eps_text = j["eps_text"].get<double>();
  for (const auto& n : j.at("nodes")) {
    r.nodes.push_back({n.at("node_id").get<std::uint32_t>(), n.at("accuracy").get<double>()});
  }
  r.mean_accuracy = j.at("mean_accuracy").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  return r;
}

LabeledData PrivatizeOnNode(const LabeledData& train, int classes, std::uint32_t node_id,
                            const PipelineConfig& config) {
  Rng rng(StreamSeed(config.seed, node_id));
  LabeledData out;
  out.features = NoiseFeatures(train.features, config.eps_image, rng);
  out.labels = config.eps_text ? NoiseLabels(train.labels, classes, *config.eps_text, rng)
                               : train.labels;
  return out;
}

LinearClassifier TrainGlobalModel(std::vector<NodePayload> parts, int classes,
                                  const PipelineConfig& config) {
  std::sort(parts.begin(), parts.end(),
            [](const NodePayload& a, const NodePayload& b) { return a.node_id < b.node_id; });
  std::vector<LabeledData> noised;
  noised.reserve(parts.size());
  for (const auto& p : parts) noised.push_back(PrivatizeOnNode(*p.data, classes, p.node_id, config));
  std::vector<const LabeledData*> blocks;
  for (const auto& n : noised) blocks.push_back(&n);
  const LabeledData pooled = Concatenate(blocks);
  if (pooled.size() == 0) throw std::invalid_argument("empty fleet");
  return TrainPredictor(pooled.features, pooled.labels, classes, SeededTraining(config));
}

double RunLocalNode(const NodeDataset& node, const PipelineConfig& config, LabeledData* shared) {
  LabeledData local = PrivatizeOnNode(node.train, node.classes, node.node_id, config);
  const auto model =
      TrainPredictor(local.features, local.labels, node.classes, SeededTraining(config));
  const double accuracy = model.Accuracy(node.validation.features, node.validation.labels);
  if (shared != nullptr) *shared = std::move(local);
  return accuracy;
}

PipelineReport MakeReport(SharingMode mode, const PipelineConfig& config,
                          std::vector<NodeAccuracy> nodes) {
  std::sort(nodes.begin(), nodes.end(),
            [](const NodeAccuracy& a, const NodeAccuracy& b) { return a.node_id < b.node_id; });
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (nodes[i].node_id == nodes[i - 1].node_id) {
      throw std::invalid_argument("duplicate node_id " + std::to_string(nodes[i].node_id));
    }
  }
  PipelineReport report;
  report.mode = mode;
  report.eps_image = config.eps_image;
  report.eps_text = config.eps_text;
  report.seed = config.seed;
  double sum = 0;
  for (const auto& n : nodes) sum += n.accuracy;
  report.mean_accuracy = nodes.empty() ? 0.0 : sum / static_cast<double>(nodes.size());
  report.nodes = std::move(nodes);
  return report;
}

PipelineReport GdpPipeline(std::span<const NodeDataset> nodes, const PipelineConfig& config) {
  config.Validate();
  if (nodes.empty()) throw std::invalid_argument("empty fleet");
  CheckUniqueIds(nodes);
  std::vector<const NodeDataset*> ordered;
  for (const auto& n : nodes) ordered.push_back(&n);
  std::sort(ordered.begin(), ordered.end(),
            [](const NodeDataset* a, const NodeDataset* b) { return a->node_id < b->node_id; });
  std::vector<NodePayload> parts;
  for (const auto* n : ordered) parts.push_back({n->node_id, &n->train});
  const auto model = TrainGlobalModel(parts, ordered.front()->classes, config);

  std::vector<NodeAccuracy> accuracies;
  for (const auto* n : ordered) {
    accuracies.push_back(
        {n->node_id, model.Accuracy(n->validation.features, n->validation.labels)});
  }
  return MakeReport(SharingMode::kGdp, config, std::move(accuracies));
}

PipelineReport LdpPipeline(std::span<const NodeDataset> nodes, const PipelineConfig& config) {
  config.Validate();
  if (nodes.empty()) throw std::invalid_argument("empty fleet");
  CheckUniqueIds(nodes);
  std::vector<NodeAccuracy> accuracies;
  for (const auto& n : nodes) accuracies.push_back({n.node_id, RunLocalNode(n, config)});
  return MakeReport(SharingMode::kLdp, config, std::move(accuracies));
}

PipelineReport RunPipeline(SharingMode mode, std::span<const NodeDataset> nodes,
                           const PipelineConfig& config) {
  return mode == SharingMode::kGdp ? GdpPipeline(nodes, config) : LdpPipeline(nodes, config);
}

}  // namespace dpiov
