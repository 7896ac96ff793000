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

#include "dpiov/mechanisms.h"
#include "dpiov/rng.h"
#include "dpiov/transforms.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dpiov {
namespace {

// Haar coefficient j of x from the definition: node j (heap order) covers a
// run of leaves; detail = (mean(left half) - mean(right half)) / 2.
double NaiveHaar(const Eigen::VectorXd& x, Eigen::Index j) {
  const Eigen::Index m = x.size();
  if (j == 0) return x.mean();
  Eigen::Index level_start = 1;
  while (level_start * 2 <= j) level_start *= 2;
  const Eigen::Index size = m / level_start;
  const Eigen::Index begin = (j - level_start) * size;
  const double left = x.segment(begin, size / 2).mean();
  const double right = x.segment(begin + size / 2, size / 2).mean();
  return (left - right) / 2;
}

TEST(HaarTest, MatchesDefinition) {
  const Eigen::VectorXd x = testing::RandomVector(32, 12);
  const Eigen::VectorXd c = HaarForward(x);
  for (Eigen::Index j = 0; j < 32; ++j) EXPECT_NEAR(c[j], NaiveHaar(x, j), 1e-12) << j;
}

TEST(HaarTest, ConstantInputHasNoDetail) {
  const Eigen::Vector4d x(3, 3, 3, 3);
  const Eigen::VectorXd c = HaarForward(x);
  EXPECT_EQ(c[0], 3);
  EXPECT_EQ(c.tail(3).cwiseAbs().maxCoeff(), 0);
}

TEST(HaarTest, RoundTrip) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Eigen::VectorXd x = testing::RandomVector(32, seed);
    EXPECT_LT((HaarInverse(HaarForward(x)) - x).cwiseAbs().maxCoeff(), 1e-9);
  }
  EXPECT_THROW(HaarForward(Eigen::VectorXd::Ones(12)), std::invalid_argument);
}

TEST(HaarTest, WeightsAreNodeSizes) {
  EXPECT_EQ(HaarWeight(8, 0), 8);
  EXPECT_EQ(HaarWeight(8, 1), 8);
  EXPECT_EQ(HaarWeight(8, 2), 4);
  EXPECT_EQ(HaarWeight(8, 3), 4);
  EXPECT_EQ(HaarWeight(8, 4), 2);
  EXPECT_EQ(HaarWeight(8, 7), 2);
}

// max over cells of sum_c W(c) |transform(e_cell)_c|, by brute force.
double BruteGeneralizedSensitivity(const Domain& d, const wavelet::Plan& plan) {
  const Eigen::VectorXd w = wavelet::Weights(d, plan);
  double worst = 0;
  for (std::int64_t cell = 0; cell < d.total_size(); ++cell) {
    const Eigen::VectorXd e = Eigen::VectorXd::Unit(d.total_size(), cell);
    worst = std::max(worst, w.cwiseProduct(wavelet::Forward(d, plan, e).cwiseAbs()).sum());
  }
  return worst;
}

TEST(WaveletTest, GeneralizedSensitivityMatchesBruteForce) {
  for (const auto& label : testing::kPaperDomains) {
    for (std::int64_t threshold : {0, 4}) {
      const Domain d = Domain::Parse(label);
      const auto plan = wavelet::MakePlan(d, {threshold});
      EXPECT_NEAR(plan.generalized_sensitivity, BruteGeneralizedSensitivity(d, plan), 1e-9)
          << label << " threshold " << threshold;
    }
  }
  EXPECT_EQ(wavelet::MakePlan(Domain::Parse("8"), {0}).generalized_sensitivity, 4.0);
}

TEST(WaveletTest, HybridRuleOn4x8) {
  const Domain d = Domain::Parse("4x8");
  const auto plan = wavelet::MakePlan(d, {4});
  EXPECT_EQ(plan.haar, (std::vector<bool>{false, true}));
  const auto r = WaveletMechanism(AllRange(d), testing::RandomData(d, 1), {1.0, true}, 1, {4});
  EXPECT_EQ(r.measurements.at("bases"), "a0:identity|a1:haar");
  EXPECT_EQ(r.measurements.at("generalized_sensitivity"), "4");
  const auto all_haar = wavelet::MakePlan(d, {0});
  EXPECT_EQ(all_haar.haar, (std::vector<bool>{true, true}));
  EXPECT_EQ(all_haar.generalized_sensitivity, 3.0 * 4.0);
}

TEST(WaveletTest, MultiDimensionalRoundTrip) {
  for (const auto& label : testing::kPaperDomains) {
    const Domain d = Domain::Parse(label);
    const auto plan = wavelet::MakePlan(d, {0});
    const Eigen::VectorXd x = testing::RandomVector(32, 4);
    EXPECT_LT((wavelet::Inverse(d, plan, wavelet::Forward(d, plan, x)) - x).cwiseAbs().maxCoeff(),
              1e-9)
        << label;
  }
}

TEST(WaveletTest, NonPowerOfTwoNeedsHybrid) {
  const Domain d = Domain::Parse("3x8");
  const DataVector x = testing::RandomData(d, 2);
  EXPECT_THROW(WaveletMechanism(AllRange(d), x, {1.0, true}, 1, {0}), std::invalid_argument);
  const auto r = WaveletMechanism(KWayMarginal(d, 1), x, {1.0, false}, 1, {4});
  EXPECT_LT(testing::MaxRelativeDiff(r.answers, testing::BruteOneWay(d, x.counts())), 1e-9);
}

TEST(WaveletTest, CoefficientNoiseFollowsWeights) {
  // 1-D, m = 8, threshold 0: the noisy total is 8 * (mean + Laplace(4/(8 eps))).
  const Domain d = Domain::Parse("8");
  const DataVector x = testing::RandomData(d, 3);
  const double eps = 0.5;
  const int trials = 20000;
  double sq = 0;
  for (int t = 0; t < trials; ++t) {
    const double e =
        WaveletMechanism(AllRange(d), x, {eps, true}, StreamSeed(5, t), {0}).answers[0] - x.Total();
    sq += e * e;
  }
  const double b = 8 * 4.0 / (8 * eps);
  EXPECT_NEAR(sq / trials, 2 * b * b, 0.05 * 2 * b * b);
}

}  // namespace
}  // namespace dpiov
