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

#ifndef JCESD_CONSTELLATION_HPP
#define JCESD_CONSTELLATION_HPP

#include "jcesd/types.hpp"

#include <cstdint>
#include <numbers>
#include <vector>

namespace jcesd {

inline constexpr double kHalfSqrt2 = std::numbers::sqrt2 / 2.0;

// sign with sign(0) = +1, so that ties map to bit 0 and projection is total.
[[nodiscard]] constexpr double sign_of(double v) noexcept { return v < 0.0 ? -1.0 : 1.0; }

struct BitPair {
    std::uint8_t b0 = 0;
    std::uint8_t b1 = 0;

    friend bool operator==(const BitPair&, const BitPair&) = default;
};

// QPSK point D_mn = (1-2m)/sqrt2 + i (1-2n)/sqrt2.
[[nodiscard]] cplx bits_to_symbol(std::uint8_t m, std::uint8_t n);

// b0 = (1 - sign Re X)/2, b1 = (1 - sign Im X)/2.
[[nodiscard]] BitPair symbol_to_bits(cplx x) noexcept;

// Nearest constellation point (quadrant projection).
[[nodiscard]] cplx hard_project(cplx x) noexcept;

[[nodiscard]] CMatrix hard_project(const CMatrix& x);
[[nodiscard]] BitGrid symbols_to_bits(const CMatrix& x);
[[nodiscard]] CMatrix bits_to_symbols(const BitGrid& bits);

// Pilots sit on the even subcarriers of OFDM symbol 0.
class PilotPattern {
  public:
    explicit PilotPattern(int F);

    [[nodiscard]] int symbol_index() const noexcept { return 0; }
    [[nodiscard]] int num_subcarriers() const noexcept { return F_; }
    [[nodiscard]] int count() const noexcept { return static_cast<int>(subcarriers_.size()); }
    [[nodiscard]] const std::vector<int>& subcarriers() const noexcept { return subcarriers_; }
    [[nodiscard]] bool is_pilot(int f, int s) const noexcept { return s == 0 && f % 2 == 0 && f < 2 * count(); }

  private:
    int F_;
    std::vector<int> subcarriers_;
};

// Known pilot symbols, one per pilot subcarrier.
[[nodiscard]] CVector default_pilot_sequence(int count);
// Pseudo-random QPSK pilots drawn from a SplitMix64 stream keyed by seed.
[[nodiscard]] CVector seeded_pilot_sequence(int count, std::uint64_t seed);

// F x S grid with the pilot symbols in place and zeros elsewhere.
[[nodiscard]] CMatrix pilot_grid(const PilotPattern& pilots, const CVector& x_pilot, int S);

struct ErrorCount {
    std::int64_t errors = 0;
    std::int64_t total = 0;

    friend bool operator==(const ErrorCount&, const ErrorCount&) = default;
};

// Hamming distance over all 2FS bits.
[[nodiscard]] ErrorCount bit_error_count(const BitGrid& est, const BitGrid& truth);
// Same, skipping the bits carried by pilot positions (known at the receiver).
[[nodiscard]] ErrorCount bit_error_count(const BitGrid& est, const BitGrid& truth, const PilotPattern& pilots);

}  // namespace jcesd

#endif  // JCESD_CONSTELLATION_HPP
