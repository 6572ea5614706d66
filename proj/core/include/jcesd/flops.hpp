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


#ifndef JCESD_FLOPS_HPP
#define JCESD_FLOPS_HPP

#include <cstdint>
#include <string>

namespace jcesd {

// Real-FLOP weights of the counting convention.
struct FlopWeights {
    static constexpr std::int64_t cmul = 6;   // complex x complex
    static constexpr std::int64_t cadd = 2;
    static constexpr std::int64_t cmac = 8;   // multiply-accumulate
    static constexpr std::int64_t cdiv = 11;  // complex / complex
    static constexpr std::int64_t rcdiv = 2;  // complex / real
    static constexpr std::int64_t cnorm = 3;  // |z|^2
};

// Operation counts of the two classical receivers, term by term, before
// calibration. Filter builds are per slot (sigma^2 may be estimated).
struct StructuralFlops {
    std::int64_t ls_pilot = 0;
    std::int64_t interp_build = 0;
    std::int64_t interp_apply = 0;
    std::int64_t mmse = 0;           // one detection over the grid
    std::int64_t freq_build = 0;     // R_f (R_f + s I)^{-1}
    std::int64_t time_build = 0;     // R_s (R_s + s I)^{-1}
    std::int64_t ls_full = 0;
    std::int64_t freq_apply = 0;
    std::int64_t time_apply = 0;

    [[nodiscard]] std::int64_t noniterative() const { return ls_pilot + interp_build + interp_apply + mmse; }
    [[nodiscard]] std::int64_t per_pass() const { return mmse + ls_full + freq_apply + time_apply; }
    [[nodiscard]] std::int64_t iterative_extra(int iterations) const {
        return freq_build + time_build + static_cast<std::int64_t>(iterations) * per_pass();
    }
};

[[nodiscard]] StructuralFlops structural_flops(int F, int S, int Nr);

// Reference point the two scale factors are pinned to.
struct FlopCalibration {
    int F = 24;
    int S = 12;
    int Nr = 4;
    int iterations = 6;
    std::int64_t noniterative_target = 340992;
    std::int64_t iterative_target = 3390912;
};

struct FlopReport {
    int F = 0;
    int S = 0;
    int Nr = 0;
    int iterations = 0;
    StructuralFlops structural;
    // alpha = alpha_num / alpha_den scales the non-iterative count,
    // beta = beta_num / beta_den the iteration-dependent part.
    std::int64_t alpha_num = 0;
    std::int64_t alpha_den = 1;
    std::int64_t beta_num = 0;
    std::int64_t beta_den = 1;
    std::int64_t noniterative = 0;
    std::int64_t iterative = 0;

    [[nodiscard]] double alpha() const { return static_cast<double>(alpha_num) / static_cast<double>(alpha_den); }
    [[nodiscard]] double beta() const { return static_cast<double>(beta_num) / static_cast<double>(beta_den); }
    // Unrounded iterative / non-iterative ratio from the affine formulas.
    [[nodiscard]] double ratio() const;
    [[nodiscard]] std::string describe() const;
};

// noniterative = round(alpha * NI_struct), iterative = noniterative +
// round(beta * (builds + n * per_pass)); exact integer arithmetic, so the
// calibration point reproduces its targets exactly.
[[nodiscard]] FlopReport flop_report(int F, int S, int Nr, int iterations, const FlopCalibration& cal = {});

}  // namespace jcesd

#endif  // JCESD_FLOPS_HPP
