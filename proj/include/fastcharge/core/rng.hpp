/* Copyright 2026 The fastcharge Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace fastcharge {

/// xoshiro256** seeded through splitmix64. The stream depends only on the
/// seed, so runs are reproducible across compilers and platforms (the normal
/// draws use std::log/std::cos and are reproducible wherever libm is).
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Unbiased integer in [0, n). n must be > 0.
  std::size_t index(std::size_t n);

  /// Standard normal via Box-Muller (the spare deviate is cached).
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  bool operator==(const Rng&) const = default;

 private:
  std::array<std::uint64_t, 4> s_{};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

inline Rng rng_new(std::uint64_t seed) { return Rng(seed); }

}  // namespace fastcharge
