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

#include "dpiov/metrics.h"

#include "gtest/gtest.h"
#include "test_util.h"

namespace dpiov {
namespace {

Eigen::VectorXd Scalar(double v) { return Eigen::VectorXd::Constant(1, v); }

TEST(MetricsTest, ScalarExamples) {
  EXPECT_DOUBLE_EQ(AbsoluteError(Scalar(103), Scalar(100)), 3);
  EXPECT_DOUBLE_EQ(RelativeError(Scalar(103), Scalar(100)).value, 0.03);
  EXPECT_FALSE(RelativeError(Scalar(103), Scalar(100)).guarded);
  EXPECT_EQ(AbsoluteError(Scalar(7), Scalar(7)), 0);
}

TEST(MetricsTest, MatchesElementwiseSum) {
  const Eigen::VectorXd a = testing::RandomVector(12, 1);
  const Eigen::VectorXd b = testing::RandomVector(12, 2);
  double sum = 0, norm = 0;
  for (int i = 0; i < 12; ++i) {
    sum += std::abs(a[i] - b[i]);
    norm += std::abs(b[i]);
  }
  EXPECT_NEAR(AbsoluteError(a, b), sum, 1e-12);
  EXPECT_NEAR(RelativeError(a, b).value, sum / std::max(norm, 1.0), 1e-12);
}

TEST(MetricsTest, GuardsZeroTruth) {
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(3);
  EXPECT_EQ(RelativeError(zero, zero).value, 0);
  const Eigen::Vector3d noisy(2, -3, 0);
  const auto r = RelativeError(noisy, zero);
  EXPECT_DOUBLE_EQ(r.value, 5);
  EXPECT_TRUE(r.guarded);
}

TEST(MetricsTest, RejectsLengthMismatch) {
  EXPECT_THROW(AbsoluteError(Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(3)),
               std::invalid_argument);
  EXPECT_THROW(RelativeError(Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(3)),
               std::invalid_argument);
}

}  // namespace
}  // namespace dpiov
