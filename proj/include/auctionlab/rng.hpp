// Copyright 2026 The AuctionLab Authors.
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
#include <limits>

namespace auctionlab {

// SplitMix64 finalizer.
constexpr std::uint64_t Mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic counter-based stream: the n-th output is
// Mix64(seed + (n + 1) * 0x9e3779b97f4a7c15), i.e. SplitMix64. The stream is
// fully specified by the 64-bit seed, so samples are reproducible across
// platforms and standard library implementations.
class Rng {
 public:
  using result_type = std::uint64_t;
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  explicit Rng(std::uint64_t seed) : seed_(seed) {}

  // Independent substream for (seed, index), used to give each experiment
  // instance or Monte-Carlo trial block its own generator.
  static Rng Derive(std::uint64_t seed, std::uint64_t index) {
    return Rng(DeriveSeed(seed, index));
  }
  static std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t index) {
    return Mix64(Mix64(seed) ^ (index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return Mix64(seed_ + (++counter_) * kGamma); }

  // Uniform integer in [0, n); unbiased (rejection on the top of the range).
  std::uint64_t UniformBelow(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = max() - (max() % n + 1) % n;
    std::uint64_t x;
    do {
      x = (*this)();
    } while (x > limit);
    return x % n;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double Uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  bool Coin() { return ((*this)() >> 63) != 0; }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace auctionlab
