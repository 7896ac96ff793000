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

#ifndef DPIOV_RNG_H_
#define DPIOV_RNG_H_

#include <cstdint>
#include <limits>
#include <random>

namespace dpiov {

// SplitMix64 finalizer. Used to derive engine seeds and substream seeds.
std::uint64_t SplitMix64(std::uint64_t x);

// Seed of substream `index` under `seed`. Distinct indices give
// statistically independent streams; the mapping is fixed forever so that
// results stay reproducible across releases.
std::uint64_t StreamSeed(std::uint64_t seed, std::uint64_t index);

// The project's random generator: a 64-bit Mersenne Twister whose state is
// initialised from SplitMix64(seed). Satisfies UniformRandomBitGenerator so
// it can drive <random> distributions, but the helpers below do their own
// bit-to-double conversion so that the core mechanisms do not depend on a
// particular standard library's distribution code.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  static constexpr result_type min() {
    return std::numeric_limits<result_type>::min();
  }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform();
  // Uniform on the open interval (0, 1); never returns 0 or 1.
  double UniformOpen();
  // Uniform integer in [0, n). Requires n > 0.
  std::uint64_t UniformInt(std::uint64_t n);
  // Bernoulli(p).
  bool Bernoulli(double p) { return Uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dpiov

#endif  // DPIOV_RNG_H_
