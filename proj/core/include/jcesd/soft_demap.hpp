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


#ifndef JCESD_SOFT_DEMAP_HPP
#define JCESD_SOFT_DEMAP_HPP

#include "jcesd/types.hpp"

#include <vector>

namespace jcesd {

// LLRs are clamped to this magnitude before the logistic.
inline constexpr double kLlrClamp = 40.0;

// Post-equalization gain G = |h|^2 / (|h|^2 + sigma^2) and error variance G(1-G).
struct EffectiveGainGrid {
    RMatrix g;     // F x S
    RMatrix eps2;  // F x S
};

// Real F x S x 2 tensors, entry (f, s, d) at index (f*S + s)*2 + d.
struct SoftBitGrid {
    int F = 0;
    int S = 0;
    std::vector<double> llr;    // ln P(b=1) / P(b=0)
    std::vector<double> prob1;  // logistic(llr)

    [[nodiscard]] double llr_at(int f, int s, int d) const { return llr[index(f, s, d)]; }
    [[nodiscard]] double prob1_at(int f, int s, int d) const { return prob1[index(f, s, d)]; }
    [[nodiscard]] std::size_t index(int f, int s, int d) const {
        return (static_cast<std::size_t>(f) * S + static_cast<std::size_t>(s)) * 2 + static_cast<std::size_t>(d);
    }
};

[[nodiscard]] EffectiveGainGrid effective_gain(const ChannelGrid& h_est, double sigma2);

// Max-log QPSK LLR: -2 sqrt2 G Re(x) / eps2 (b0), same with Im (b1).
// Cells with eps2 == 0 (zero channel) are erased and get LLR 0.
[[nodiscard]] SoftBitGrid llr(const CMatrix& x_soft, const EffectiveGainGrid& gains);

// Numerically stable logistic of the clamped LLR.
[[nodiscard]] double llr_to_prob(double llr);

}  // namespace jcesd

#endif  // JCESD_SOFT_DEMAP_HPP
