// Copyright 2026 The Authors.
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

#ifndef DUALSEED_RNG_HPP_
#define DUALSEED_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>

namespace dualseed {

// Counter-based generator: output k of a stream is the SplitMix64 finalizer
// applied to key + k * gamma, so any (seed, stream, k) is addressable and
// results are identical on every platform. Distribution helpers are written
// out here rather than taken from <random>, whose distributions are
// implementation-defined.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(DeriveKey(seed, stream)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept { return Mix(key_ + (++counter_) * kGamma); }

  // Independent child stream; does not advance this generator.
  CounterRng Substream(std::uint64_t id) const noexcept {
    CounterRng child(0);
    child.key_ = DeriveKey(key_, id);
    return child;
  }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  double Uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * Uniform();
  }

  // Standard normal via Box-Muller.
  double Normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - Uniform();  // (0, 1]
    double u2 = Uniform();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  // Uniform integer in [0, bound), rejection sampling (bound > 0).
  std::uint64_t Below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t x;
    do {
      x = (*this)();
    } while (x >= limit);
    return x % bound;
  }

  template <typename T>
  void Shuffle(std::span<T> items) noexcept {
    for (std::size_t k = items.size(); k > 1; --k) {
      std::size_t pick = static_cast<std::size_t>(Below(k));
      std::swap(items[k - 1], items[pick]);
    }
  }

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  static constexpr std::uint64_t Mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static constexpr std::uint64_t DeriveKey(std::uint64_t seed,
                                           std::uint64_t stream) noexcept {
    return Mix(Mix(seed) ^ (Mix(stream + kGamma) + 0xD1B54A32D192ED03ULL));
  }

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace dualseed

#endif  // DUALSEED_RNG_HPP_
