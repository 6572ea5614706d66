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

#include "jcesd/constellation.hpp"

#include <doctest.h>

#include <cmath>

using namespace jcesd;

namespace {

ChannelGrid cell_with_energy(double e) {
    ChannelGrid h(1, 1, 4);
    h(0, 0, 2) = cplx(0.0, std::sqrt(e));
    return h;
}

EffectiveGainGrid gains_of(double g, double eps2, int F = 1, int S = 1) {
    return {RMatrix::Constant(F, S, g), RMatrix::Constant(F, S, eps2)};
}

}  // namespace

TEST_CASE("effective gain examples") {
    auto a = effective_gain(cell_with_energy(1.0), 1.0);
    CHECK(a.g(0, 0) == doctest::Approx(0.5));
    CHECK(a.eps2(0, 0) == doctest::Approx(0.25));
    auto b = effective_gain(cell_with_energy(3.0), 1.0);
    CHECK(b.g(0, 0) == doctest::Approx(0.75));
    CHECK(b.eps2(0, 0) == doctest::Approx(0.1875));
    auto z = effective_gain(ChannelGrid(1, 1, 4), 1.0);
    CHECK(z.g(0, 0) == 0.0);
    CHECK(z.eps2(0, 0) == 0.0);
    CHECK_THROWS_AS((void)effective_gain(cell_with_energy(1.0), 0.0), std::invalid_argument);
}

TEST_CASE("LLR examples") {
    CMatrix x(1, 1);
    x(0, 0) = cplx(kHalfSqrt2, 0.0);
    const auto s = llr(x, gains_of(0.5, 0.25));
    CHECK(s.llr_at(0, 0, 0) == doctest::Approx(-4.0).epsilon(1e-14));
    CHECK(s.llr_at(0, 0, 1) == 0.0);
    CHECK(s.prob1_at(0, 0, 1) == 0.5);

    x(0, 0) = 0.0;
    const auto z = llr(x, gains_of(0.5, 0.25));
    CHECK(z.llr_at(0, 0, 0) == 0.0);
    CHECK(z.prob1_at(0, 0, 0) == 0.5);

    x(0, 0) = cplx(-0.3, 0.2);
    const auto n = llr(x, gains_of(0.8, 0.16));
    CHECK(n.llr_at(0, 0, 0) > 0.0);
    CHECK(n.prob1_at(0, 0, 0) > 0.5);
    CHECK(n.llr_at(0, 0, 1) < 0.0);
}

TEST_CASE("erased cells carry no information") {
    CMatrix x(1, 1);
    x(0, 0) = cplx(0.7, -0.7);
    const auto s = llr(x, effective_gain(ChannelGrid(1, 1, 4), 0.5));
    CHECK(s.llr_at(0, 0, 0) == 0.0);
    CHECK(s.prob1_at(0, 0, 1) == 0.5);
}

TEST_CASE("logistic examples and symmetry") {
    CHECK(llr_to_prob(0.0) == 0.5);
    CHECK(llr_to_prob(std::log(3.0)) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(std::abs(llr_to_prob(1e300) - 1.0) < 1e-12);
    CHECK(llr_to_prob(-1e300) > 0.0);
    for (double v = -kLlrClamp; v <= kLlrClamp; v += 0.37) {
        CHECK(std::abs(llr_to_prob(v) + llr_to_prob(-v) - 1.0) <= 1e-15);
    }
}

TEST_CASE("LLR sign agrees with hard decisions and scales linearly") {
    const int F = 6;
    const int S = 5;
    CMatrix x = CMatrix::Random(F, S);
    const auto gains = gains_of(0.6, 0.24, F, S);
    const auto s = llr(x, gains);
    const BitGrid hard = symbols_to_bits(hard_project(x));
    const double slope = -2.0 * std::sqrt(2.0) * 0.6 / 0.24;
    for (int f = 0; f < F; ++f) {
        for (int t = 0; t < S; ++t) {
            CHECK(static_cast<int>(s.llr_at(f, t, 0) > 0.0) == hard(f, t, 0));
            CHECK(static_cast<int>(s.llr_at(f, t, 1) > 0.0) == hard(f, t, 1));
            CHECK(s.llr_at(f, t, 0) == doctest::Approx(slope * x(f, t).real()).epsilon(1e-14));
        }
    }
    CHECK_THROWS_AS((void)llr(x, gains_of(0.6, 0.24, F, S + 1)), ShapeError);
}
