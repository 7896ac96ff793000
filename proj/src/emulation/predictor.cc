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

#include "dpiov/emulation/predictor.h"

#include <random>
#include <stdexcept>

#include "dpiov/rng.h"

namespace dpiov {
namespace {

Eigen::MatrixXd WithBias(const Eigen::MatrixXd& features) {
  Eigen::MatrixXd x(features.rows(), features.cols() + 1);
  x.leftCols(features.cols()) = features;
  x.col(features.cols()).setOnes();
  return x;
}

}  // namespace

std::vector<int> LinearClassifier::Predict(const Eigen::MatrixXd& features) const {
  if (features.cols() + 1 != weights_.rows()) {
    throw std::invalid_argument("feature width does not match the model");
  }
  const Eigen::MatrixXd scores = WithBias(features) * weights_;
  std::vector<int> out(static_cast<std::size_t>(scores.rows()));
  for (Eigen::Index r = 0; r < scores.rows(); ++r) {
    Eigen::Index best = 0;
    scores.row(r).maxCoeff(&best);
    out[r] = static_cast<int>(best);
  }
  return out;
}

double LinearClassifier::Accuracy(const Eigen::MatrixXd& features,
                                  std::span<const int> labels) const {
  if (labels.empty()) return 0.0;
  const auto predicted = Predict(features);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) correct += predicted[i] == labels[i];
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

nlohmann::json LinearClassifier::ToJson() const {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < weights_.rows(); ++r) {
    std::vector<double> row(weights_.cols());
    for (Eigen::Index c = 0; c < weights_.cols(); ++c) row[c] = weights_(r, c);
    rows.push_back(row);
  }
  return rows;
}

LinearClassifier LinearClassifier::FromJson(const nlohmann::json& j) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  if (rows.empty()) throw std::invalid_argument("empty model");
  Eigen::MatrixXd w(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows[0].size()) throw std::invalid_argument("ragged model weights");
    for (std::size_t c = 0; c < rows[r].size(); ++c) w(r, c) = rows[r][c];
  }
  return LinearClassifier(std::move(w));
}

LinearClassifier TrainPredictor(const Eigen::MatrixXd& features, std::span<const int> labels,
                                int classes, const TrainOptions& options) {
  if (features.rows() == 0) throw std::invalid_argument("empty training set");
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw std::invalid_argument("features and labels differ in length");
  }
  if (classes < 1) throw std::invalid_argument("classes must be >= 1");

  const Eigen::MatrixXd x = WithBias(features);
  const auto n = static_cast<double>(x.rows());
  Eigen::MatrixXd onehot = Eigen::MatrixXd::Zero(x.rows(), classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= classes) throw std::invalid_argument("label out of range");
    onehot(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
  }

  Rng rng(options.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd w(x.cols(), classes);
  for (Eigen::Index r = 0; r < w.rows(); ++r) {
    for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = options.init_scale * gauss(rng);
  }

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    Eigen::MatrixXd scores = x * w;
    scores.colwise() -= scores.rowwise().maxCoeff();
    Eigen::MatrixXd probs = scores.array().exp().matrix();
    probs.array().colwise() /= probs.rowwise().sum().array();
    Eigen::MatrixXd grad = x.transpose() * (probs - onehot) / n;
    grad.topRows(w.rows() - 1) += options.l2 * w.topRows(w.rows() - 1);
    w -= options.step * grad;
  }
  return LinearClassifier(std::move(w));
}

}  // namespace dpiov
