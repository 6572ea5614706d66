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

#include "jcesd/constellation.hpp"

#include "jcesd/rng.hpp"

namespace jcesd {

cplx bits_to_symbol(std::uint8_t m, std::uint8_t n) {
    if (m > 1 || n > 1) {
        throw std::invalid_argument("bits_to_symbol: bits must be 0 or 1");
    }
    return {(1.0 - 2.0 * m) * kHalfSqrt2, (1.0 - 2.0 * n) * kHalfSqrt2};
}

BitPair symbol_to_bits(cplx x) noexcept {
    return {static_cast<std::uint8_t>(x.real() < 0.0 ? 1 : 0), static_cast<std::uint8_t>(x.imag() < 0.0 ? 1 : 0)};
}

cplx hard_project(cplx x) noexcept {
    return {sign_of(x.real()) * kHalfSqrt2, sign_of(x.imag()) * kHalfSqrt2};
}

CMatrix hard_project(const CMatrix& x) {
    return x.unaryExpr([](const cplx& v) { return hard_project(v); });
}

BitGrid symbols_to_bits(const CMatrix& x) {
    const auto F = static_cast<int>(x.rows());
    const auto S = static_cast<int>(x.cols());
    BitGrid bits(F, S);
    for (int f = 0; f < F; ++f) {
        for (int s = 0; s < S; ++s) {
            const auto b = symbol_to_bits(x(f, s));
            bits(f, s, 0) = b.b0;
            bits(f, s, 1) = b.b1;
        }
    }
    return bits;
}

CMatrix bits_to_symbols(const BitGrid& bits) {
    CMatrix x(bits.F(), bits.S());
    for (int f = 0; f < bits.F(); ++f) {
        for (int s = 0; s < bits.S(); ++s) {
            x(f, s) = bits_to_symbol(bits(f, s, 0), bits(f, s, 1));
        }
    }
    return x;
}

PilotPattern::PilotPattern(int F) : F_(F) {
    if (F < 2 || F % 2 != 0) {
        throw ShapeError("pilot pattern needs an even, positive number of subcarriers (got " + std::to_string(F) + ")");
    }
    subcarriers_.reserve(static_cast<std::size_t>(F / 2));
    for (int f = 0; f < F; f += 2) {
        subcarriers_.push_back(f);
    }
}

CVector default_pilot_sequence(int count) {
    return CVector::Constant(count, cplx(kHalfSqrt2, kHalfSqrt2));
}

CVector seeded_pilot_sequence(int count, std::uint64_t seed) {
    CVector out(count);
    std::uint64_t state = seed;
    for (int k = 0; k < count; ++k) {
        const std::uint64_t word = splitmix64(state);
        out(k) = bits_to_symbol(static_cast<std::uint8_t>(word >> 63U), static_cast<std::uint8_t>((word >> 62U) & 1U));
    }
    return out;
}

CMatrix pilot_grid(const PilotPattern& pilots, const CVector& x_pilot, int S) {
    if (x_pilot.size() != pilots.count()) {
        throw ShapeError("pilot_grid: expected " + std::to_string(pilots.count()) + " pilot symbols, got " +
                         std::to_string(x_pilot.size()));
    }
    CMatrix grid = CMatrix::Zero(pilots.num_subcarriers(), S);
    for (int k = 0; k < pilots.count(); ++k) {
        grid(pilots.subcarriers()[static_cast<std::size_t>(k)], pilots.symbol_index()) = x_pilot(k);
    }
    return grid;
}

ErrorCount bit_error_count(const BitGrid& est, const BitGrid& truth) {
    if (est.F() != truth.F() || est.S() != truth.S()) {
        throw ShapeError("bit_error_count: bit grids have different shapes");
    }
    ErrorCount out;
    out.total = static_cast<std::int64_t>(est.size());
    for (std::size_t i = 0; i < est.size(); ++i) {
        out.errors += est.raw()[i] != truth.raw()[i] ? 1 : 0;
    }
    return out;
}

ErrorCount bit_error_count(const BitGrid& est, const BitGrid& truth, const PilotPattern& pilots) {
    if (est.F() != truth.F() || est.S() != truth.S()) {
        throw ShapeError("bit_error_count: bit grids have different shapes");
    }
    if (pilots.num_subcarriers() != est.F()) {
        throw ShapeError("bit_error_count: pilot pattern does not match grid");
    }
    ErrorCount out;
    for (int f = 0; f < est.F(); ++f) {
        for (int s = 0; s < est.S(); ++s) {
            if (pilots.is_pilot(f, s)) {
                continue;
            }
            for (int d = 0; d < 2; ++d) {
                out.errors += est(f, s, d) != truth(f, s, d) ? 1 : 0;
                ++out.total;
            }
        }
    }
    return out;
}

}  // namespace jcesd
