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


#ifndef JCESD_PERTURB_HPP
#define JCESD_PERTURB_HPP

#include "jcesd/rng.hpp"
#include "jcesd/types.hpp"

#include <string>
#include <string_view>

namespace jcesd {

// Time step of the CFO phase model: one 2192-sample OFDM symbol (2048 + CP)
// at the 15 kHz numerology sample rate of 15e3 * 2048 Hz.
inline constexpr double kCfoSymbolPeriodS = 2192.0 / (15000.0 * 2048.0);

// Y'(f, s, r) = Y(f, s, r) exp(2 pi i df kCfoSymbolPeriodS s).
[[nodiscard]] ReceivedGrid apply_cfo(const ReceivedGrid& y, double delta_f_hz);

// Adds CN(0, 2 sigma1_sq) on subcarriers f < F/2 and CN(0, 2 sigma2_sq) on the
// rest, i.e. sigma_k^2 per real dimension. Draw order is (f, s, r).
[[nodiscard]] ReceivedGrid apply_asymmetric_noise(const ReceivedGrid& y, double sigma1_sq, double sigma2_sq, Rng& rng);

struct Perturbation {
    enum class Kind { none, cfo, asym_noise };

    Kind kind = Kind::none;
    double a = 0.0;  // df in Hz, or sigma1^2
    double b = 0.0;  // sigma2^2

    // "none", "cfo:<df>", "asym_noise:<s1sq>,<s2sq>".
    [[nodiscard]] static Perturbation parse(std::string_view text);
    // Canonical form accepted by parse(); used as the report column.
    [[nodiscard]] std::string describe() const;

    // Applies the perturbation; only asym_noise consumes `rng`.
    [[nodiscard]] ReceivedGrid apply(const ReceivedGrid& y, Rng& rng) const;

    friend bool operator==(const Perturbation&, const Perturbation&) = default;
};

}  // namespace jcesd

#endif  // JCESD_PERTURB_HPP
