// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The jcesd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef JCESD_RNG_HPP
#define JCESD_RNG_HPP

#include "jcesd/types.hpp"

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace jcesd {

using Rng = std::mt19937_64;

// SplitMix64 finalizer. Also the generator used for dataset splits and
// seeded pilots, so other implementations can reproduce them bit-exactly.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30U)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27U)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31U);
}

// Independent stream seed for (master, key0, key1, ...); used to key
// per-slot streams so results do not depend on scheduling.
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys) noexcept {
    std::uint64_t state = master;
    std::uint64_t out = splitmix64(state);
    for (auto k : keys) {
        state ^= k + 0x632BE59BD9B4E019ULL + (out << 6U) + (out >> 2U);
        out = splitmix64(state);
    }
    return out;
}

// Circularly-symmetric complex Gaussian with total variance `variance`.
inline cplx complex_normal(Rng& rng, double variance) {
    std::normal_distribution<double> n(0.0, 1.0);
    const double scale = std::sqrt(variance / 2.0);
    const double re = n(rng);
    const double im = n(rng);
    return {scale * re, scale * im};
}

}  // namespace jcesd

#endif  // JCESD_RNG_HPP
