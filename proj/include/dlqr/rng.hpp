// Copyright 2026 The distlqr Authors
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

#ifndef DLQR_RNG_HPP_
#define DLQR_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>

namespace dlqr {

namespace detail {

// splitmix64 finalizer; used to decorrelate engine seeds derived from
// (master seed, stream index) pairs.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

// Deterministic random source. Identical seed => identical draw sequence
// (bit-exact within one build). Parallel consumers use substream(master, i),
// one stream per task index, so results do not depend on scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(detail::splitmix64(seed)) {}

  static Rng substream(std::uint64_t master_seed, std::uint64_t index) {
    // Two rounds of mixing keep distinct (seed, index) pairs decorrelated.
    return Rng(detail::splitmix64(master_seed ^ detail::splitmix64(index + 1)));
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller, two uniforms per call (a zero u1 is
  // redrawn). Nothing is cached across calls.
  double normal() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dlqr

#endif  // DLQR_RNG_HPP_
