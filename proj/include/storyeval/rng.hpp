// Copyright 2026 The storyeval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace storyeval {

/// Seeded xoshiro256** generator with hand-rolled distributions.
///
/// The standard <random> distributions are implementation-defined, which
/// breaks the fixed-seed reproducibility contract across toolchains. All
/// sampling here is specified bit-for-bit, so a (seed, call sequence) pair
/// yields the same draws on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform in [0, bound); bound must be > 0. Unbiased (rejection-free
  /// multiply-shift with a widening correction).
  std::uint64_t uniform_u64(std::uint64_t bound);

  std::size_t uniform_index(std::size_t n) {
    return static_cast<std::size_t>(uniform_u64(n));
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  bool bernoulli(double p) { return uniform() < p; }

  /// Index drawn proportionally to non-negative weights (need not sum to 1).
  /// At least one weight must be positive.
  std::size_t categorical(std::span<const double> weights);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = uniform_index(i);
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t state_[4];
};

/// Stable seed derivation for labeled sub-streams, e.g.
/// derive_seed(seed, "perturb/" + story.id). FNV-1a over the label mixed
/// into the root seed; independent of platform.
std::uint64_t derive_seed(std::uint64_t root, std::string_view label);

}  // namespace storyeval
