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

#ifndef DPIOV_TRANSFORMS_H_
#define DPIOV_TRANSFORMS_H_

#include <cstdint>
#include <stdexcept>

#include <Eigen/Dense>

namespace dpiov {

template <typename Scalar>
using ColumnVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// One-dimensional Haar decomposition of a length-2^l vector.
//
// Output layout: index 0 holds the mean of all entries; index j >= 1 is the
// detail of binary-tree node j in heap order (root detail at 1), defined as
// (mean(left half) - mean(right half)) / 2 over the leaves under that node.
template <typename Derived>
ColumnVector<typename Derived::Scalar> HaarForward(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index m = x.size();
  if (m < 1 || (m & (m - 1)) != 0) {
    throw std::invalid_argument("Haar transform needs a power-of-two length");
  }
  ColumnVector<Scalar> coeffs(m);
  ColumnVector<Scalar> means = x;
  for (Eigen::Index len = m; len > 1; len /= 2) {
    const Eigen::Index half = len / 2;
    ColumnVector<Scalar> next(half);
    for (Eigen::Index i = 0; i < half; ++i) {
      const Scalar left = means[2 * i];
      const Scalar right = means[2 * i + 1];
      next[i] = (left + right) / Scalar(2);
      coeffs[half + i] = (left - right) / Scalar(2);
    }
    means = std::move(next);
  }
  coeffs[0] = means[0];
  return coeffs;
}

// Inverse of HaarForward: every leaf is the mean plus the signed details of
// its ancestors (+ in a left subtree, - in a right one).
template <typename Derived>
ColumnVector<typename Derived::Scalar> HaarInverse(const Eigen::MatrixBase<Derived>& coeffs) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index m = coeffs.size();
  if (m < 1 || (m & (m - 1)) != 0) {
    throw std::invalid_argument("Haar transform needs a power-of-two length");
  }
  ColumnVector<Scalar> values(1);
  values[0] = coeffs[0];
  for (Eigen::Index len = 1; len < m; len *= 2) {
    ColumnVector<Scalar> next(2 * len);
    for (Eigen::Index i = 0; i < len; ++i) {
      next[2 * i] = values[i] + coeffs[len + i];
      next[2 * i + 1] = values[i] - coeffs[len + i];
    }
    values = std::move(next);
  }
  return values;
}

// Privelet weight of Haar coefficient `index` for a length-m transform:
// m for the mean, otherwise the number of leaves under the node.
inline double HaarWeight(Eigen::Index m, Eigen::Index index) {
  if (index == 0) return static_cast<double>(m);
  Eigen::Index level_start = 1;
  while (level_start * 2 <= index) level_start *= 2;
  return static_cast<double>(m / level_start);
}

// Unnormalised Walsh-Hadamard transform: out[a] = sum_x (-1)^{popcount(a&x)} v[x].
template <typename Derived>
ColumnVector<typename Derived::Scalar> WalshHadamard(const Eigen::MatrixBase<Derived>& v) {
  const Eigen::Index n = v.size();
  if (n < 1 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("Walsh-Hadamard transform needs a power-of-two length");
  }
  ColumnVector<typename Derived::Scalar> out = v;
  for (Eigen::Index h = 1; h < n; h *= 2) {
    for (Eigen::Index i = 0; i < n; i += 2 * h) {
      for (Eigen::Index j = i; j < i + h; ++j) {
        const auto a = out[j];
        const auto b = out[j + h];
        out[j] = a + b;
        out[j + h] = a - b;
      }
    }
  }
  return out;
}

}  // namespace dpiov

#endif  // DPIOV_TRANSFORMS_H_
