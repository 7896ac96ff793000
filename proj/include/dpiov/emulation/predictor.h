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

#ifndef DPIOV_EMULATION_PREDICTOR_H_
#define DPIOV_EMULATION_PREDICTOR_H_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace dpiov {

struct TrainOptions {
  int epochs = 200;
  double step = 0.5;
  double l2 = 1e-4;
  double init_scale = 0.01;  // stddev of the seeded initial weights
  std::uint64_t seed = 0;
};

// Multinomial logistic regression: scores = [features, 1] * weights.
class LinearClassifier {
 public:
  LinearClassifier() = default;
  explicit LinearClassifier(Eigen::MatrixXd weights) : weights_(std::move(weights)) {}

  // (feature_dim + 1) x classes; the last row is the bias.
  const Eigen::MatrixXd& weights() const { return weights_; }
  int classes() const { return static_cast<int>(weights_.cols()); }

  std::vector<int> Predict(const Eigen::MatrixXd& features) const;
  double Accuracy(const Eigen::MatrixXd& features, std::span<const int> labels) const;

  nlohmann::json ToJson() const;
  static LinearClassifier FromJson(const nlohmann::json& j);

 private:
  Eigen::MatrixXd weights_;
};

// Full-batch gradient descent on the softmax cross-entropy plus L2 penalty.
// Throws std::invalid_argument on an empty training set.
LinearClassifier TrainPredictor(const Eigen::MatrixXd& features, std::span<const int> labels,
                                int classes, const TrainOptions& options = {});

}  // namespace dpiov

#endif  // DPIOV_EMULATION_PREDICTOR_H_
