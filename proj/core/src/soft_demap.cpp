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


#include "jcesd/soft_demap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace jcesd {

EffectiveGainGrid effective_gain(const ChannelGrid& h_est, double sigma2) {
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
        throw std::invalid_argument("effective_gain: sigma^2 must be finite and > 0");
    }
    EffectiveGainGrid out{RMatrix::Zero(h_est.F(), h_est.S()), RMatrix::Zero(h_est.F(), h_est.S())};
    for (int f = 0; f < h_est.F(); ++f) {
        for (int s = 0; s < h_est.S(); ++s) {
            double e = 0.0;
            for (int r = 0; r < h_est.Nr(); ++r) {
                e += std::norm(h_est(f, s, r));
            }
            const double g = e / (e + sigma2);
            out.g(f, s) = g;
            out.eps2(f, s) = g * (1.0 - g);
        }
    }
    return out;
}

double llr_to_prob(double llr) {
    const double x = std::clamp(llr, -kLlrClamp, kLlrClamp);
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

SoftBitGrid llr(const CMatrix& x_soft, const EffectiveGainGrid& gains) {
    const auto F = static_cast<int>(x_soft.rows());
    const auto S = static_cast<int>(x_soft.cols());
    if (gains.g.rows() != F || gains.g.cols() != S || gains.eps2.rows() != F || gains.eps2.cols() != S) {
        throw ShapeError("llr: gain grid does not match the symbol grid");
    }
    SoftBitGrid out;
    out.F = F;
    out.S = S;
    out.llr.assign(static_cast<std::size_t>(F) * S * 2, 0.0);
    out.prob1.assign(out.llr.size(), 0.5);
    for (int f = 0; f < F; ++f) {
        for (int s = 0; s < S; ++s) {
            const double eps2 = gains.eps2(f, s);
            if (!(eps2 > 0.0)) {
                continue;  // erased
            }
            const double slope = -2.0 * std::numbers::sqrt2 * gains.g(f, s) / eps2;
            const double l0 = slope * x_soft(f, s).real();
            const double l1 = slope * x_soft(f, s).imag();
            out.llr[out.index(f, s, 0)] = l0;
            out.llr[out.index(f, s, 1)] = l1;
            out.prob1[out.index(f, s, 0)] = llr_to_prob(l0);
            out.prob1[out.index(f, s, 1)] = llr_to_prob(l1);
        }
    }
    return out;
}

}  // namespace jcesd
