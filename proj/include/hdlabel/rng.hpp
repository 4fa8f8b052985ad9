// Copyright 2026 The hdlabel Authors
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

#ifndef HDLABEL_RNG_HPP_
#define HDLABEL_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>

namespace hdlabel {

// Seeded stream with fully specified derived draws: std::mt19937_64 is
// bit-exact across standard libraries, but the std distributions are not, so
// uniform and normal variates are derived here by fixed formulas.
//   Uniform01: (next() >> 11) * 2^-53, in [0, 1).
//   UniformIndex(n): rejection sampling on the top bits, unbiased.
//   Normal: Box-Muller, cos branch only, u1 taken from (0, 1].
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }

  double Uniform01() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n); n must be positive.
  std::uint64_t UniformIndex(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v;
    do {
      v = Next();
    } while (v >= limit);
    return v % n;
  }

  double Normal() {
    const double u1 = 1.0 - Uniform01();
    const double u2 = Uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hdlabel

#endif  // HDLABEL_RNG_HPP_
