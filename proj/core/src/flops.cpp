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


#include "jcesd/flops.hpp"

#include <sstream>
#include <stdexcept>

namespace jcesd {

namespace {

using W = FlopWeights;

// LU of an n x n complex matrix: per pivot, (n-k-1) divisions and (n-k-1)^2 MACs.
std::int64_t lu_cost(std::int64_t n) {
    std::int64_t c = 0;
    for (std::int64_t k = 0; k < n; ++k) {
        const std::int64_t m = n - k - 1;
        c += m * W::cdiv + m * m * W::cmac;
    }
    return c;
}

// Forward + back substitution for m right-hand sides.
std::int64_t substitution_cost(std::int64_t n, std::int64_t m) {
    return m * (n * (n - 1) * W::cmac + n * W::cdiv);
}

// Regularize (n real adds on the diagonal), factor, solve m columns.
std::int64_t solve_cost(std::int64_t n, std::int64_t m) { return n + lu_cost(n) + substitution_cost(n, m); }

std::int64_t round_div(std::int64_t num, std::int64_t den) { return (2 * num + den) / (2 * den); }

}  // namespace

StructuralFlops structural_flops(int F_, int S_, int Nr_) {
    if (F_ <= 0 || S_ <= 0 || Nr_ <= 0 || F_ % 2 != 0) {
        throw std::invalid_argument("structural_flops: need positive dimensions and even F");
    }
    const std::int64_t F = F_;
    const std::int64_t S = S_;
    const std::int64_t R = Nr_;
    const std::int64_t P = F / 2;

    StructuralFlops c;
    c.ls_pilot = P * R * W::cmul;
    c.interp_build = solve_cost(P, F);
    c.interp_apply = F * R * (P * W::cmul + (P - 1) * W::cadd);
    // Per RE: Nr products, Nr norms, their sums, +sigma^2, one complex/real division.
    c.mmse = F * S * (R * W::cmul + (R - 1) * W::cadd + R * W::cnorm + (R - 1) + 1 + W::rcdiv);
    c.freq_build = solve_cost(F, F);
    c.time_build = solve_cost(S, S);
    c.ls_full = F * S * R * W::cdiv;
    c.freq_apply = R * S * F * (F * W::cmul + (F - 1) * W::cadd);
    c.time_apply = R * F * S * (S * W::cmul + (S - 1) * W::cadd);
    return c;
}

double FlopReport::ratio() const {
    const double ni = alpha() * static_cast<double>(structural.noniterative());
    const double extra = beta() * static_cast<double>(structural.iterative_extra(iterations));
    return (ni + extra) / ni;
}

FlopReport flop_report(int F, int S, int Nr, int iterations, const FlopCalibration& cal) {
    if (iterations < 0) {
        throw std::invalid_argument("flop_report: iterations must be >= 0");
    }
    const StructuralFlops ref = structural_flops(cal.F, cal.S, cal.Nr);
    FlopReport r;
    r.F = F;
    r.S = S;
    r.Nr = Nr;
    r.iterations = iterations;
    r.structural = structural_flops(F, S, Nr);
    r.alpha_num = cal.noniterative_target;
    r.alpha_den = ref.noniterative();
    r.beta_num = cal.iterative_target - cal.noniterative_target;
    r.beta_den = ref.iterative_extra(cal.iterations);
    r.noniterative = round_div(r.alpha_num * r.structural.noniterative(), r.alpha_den);
    r.iterative = r.noniterative + round_div(r.beta_num * r.structural.iterative_extra(iterations), r.beta_den);
    return r;
}

std::string FlopReport::describe() const {
    std::ostringstream os;
    os << "# convention: complex mul 6, add 2, MAC 8, div 11, complex/real div 2, |z|^2 3 real FLOPs\n";
    os << "# solves: n diagonal adds + LU (n-k-1 div, (n-k-1)^2 MAC per pivot) + substitution per column\n";
    os << "# structural terms at F=" << F << " S=" << S << " Nr=" << Nr << "\n";
    os << "#   ls_pilot      " << structural.ls_pilot << "\n";
    os << "#   interp_build  " << structural.interp_build << "\n";
    os << "#   interp_apply  " << structural.interp_apply << "\n";
    os << "#   mmse          " << structural.mmse << "\n";
    os << "#   freq_build    " << structural.freq_build << "\n";
    os << "#   time_build    " << structural.time_build << "\n";
    os << "#   ls_full       " << structural.ls_full << "\n";
    os << "#   freq_apply    " << structural.freq_apply << "\n";
    os << "#   time_apply    " << structural.time_apply << "\n";
    os << "# calibration: alpha = " << alpha_num << "/" << alpha_den << " = " << alpha() << ", beta = " << beta_num
       << "/" << beta_den << " = " << beta() << "\n";
    os << "# noniterative = round(alpha * NI), iterative = noniterative + round(beta * (builds + n * pass))\n";
    return os.str();
}

}  // namespace jcesd
