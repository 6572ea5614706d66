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


#include "jcesd/perturb.hpp"

#include "jcesd/channel.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace jcesd;
using testutil::max_abs_diff;

namespace {

ReceivedGrid random_grid(std::uint64_t seed) {
    ChannelParams p;
    p.doppler_hz = 40.0;
    return synthesize_slot(p, 5.0, seed).y;
}

}  // namespace

TEST_CASE("CFO phase model constants") {
    CHECK(kCfoSymbolPeriodS == 2192.0 / 30720000.0);
    // Offset giving a quarter turn per symbol.
    const double df = 15000.0 * 2048.0 / (4.0 * 2192.0);
    CHECK(df == doctest::Approx(3503.6496).epsilon(1e-7));
    CHECK(2.0 * std::numbers::pi * df * kCfoSymbolPeriodS == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-15));

    const ReceivedGrid y = random_grid(1);
    const ReceivedGrid z = apply_cfo(y, df);
    for (int r = 0; r < y.Nr(); ++r) {
        CHECK(max_abs_diff(z.antenna(r).col(1), y.antenna(r).col(1) * cplx(0.0, 1.0)) < 1e-14);
        CHECK(max_abs_diff(z.antenna(r).col(2), -y.antenna(r).col(2)) < 1e-14);
    }
}

TEST_CASE("CFO identity, first symbol and modulus") {
    const ReceivedGrid y = random_grid(2);
    CHECK(apply_cfo(y, 0.0) == y);
    const ReceivedGrid z = apply_cfo(y, 1234.5);
    for (int r = 0; r < y.Nr(); ++r) {
        CHECK(z.antenna(r).col(0) == y.antenna(r).col(0));
        for (int f = 0; f < y.F(); ++f) {
            for (int s = 0; s < y.S(); ++s) {
                const double a = std::abs(y(f, s, r));
                CHECK(std::abs(std::abs(z(f, s, r)) - a) <= 4e-16 * a);
            }
        }
    }
    CHECK_THROWS_AS((void)apply_cfo(y, std::nan("")), std::invalid_argument);
}

TEST_CASE("CFO offsets compose additively") {
    const ReceivedGrid y = random_grid(3);
    for (double a : {-500.0, 17.0, 800.0}) {
        for (double b : {3.5, -1200.0, 4000.0}) {
            CHECK(max_abs_diff(apply_cfo(apply_cfo(y, a), b), apply_cfo(y, a + b)) < 1e-12);
        }
    }
}

TEST_CASE("asymmetric noise: identity and per-block variance") {
    const ReceivedGrid y = random_grid(4);
    Rng rng(5);
    CHECK(apply_asymmetric_noise(y, 0.0, 0.0, rng) == y);

    // 180 grids x 12 x 12 x 4 = 103680 samples per block.
    double lower = 0.0;
    double upper = 0.0;
    std::int64_t n_lower = 0;
    std::int64_t n_upper = 0;
    Rng draw(6);
    for (int t = 0; t < 180; ++t) {
        const ReceivedGrid z = apply_asymmetric_noise(y, 1.0, 0.1, draw);
        for (int r = 0; r < y.Nr(); ++r) {
            const CMatrix d = z.antenna(r) - y.antenna(r);
            lower += d.topRows(12).squaredNorm();
            upper += d.bottomRows(12).squaredNorm();
            n_lower += d.topRows(12).size();
            n_upper += d.bottomRows(12).size();
        }
    }
    REQUIRE(n_lower >= 100000);
    CHECK(lower / static_cast<double>(n_lower) == doctest::Approx(2.0).epsilon(0.05));
    CHECK(upper / static_cast<double>(n_upper) == doctest::Approx(0.2).epsilon(0.05));
    CHECK_THROWS_AS((void)apply_asymmetric_noise(y, -1.0, 0.0, rng), std::invalid_argument);
}

TEST_CASE("asymmetric noise with equal variances matches a raised noise floor") {
    ChannelParams p;
    const SlotSynthesizer synth(p);
    double added = 0.0;
    double floor = 0.0;
    std::int64_t n = 0;
    const double s2 = std::pow(10.0, -0.5);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Slot clean = synth.synthesize(std::numeric_limits<double>::infinity(), seed);
        Rng rng(seed + 1000);
        const ReceivedGrid z = apply_asymmetric_noise(clean.y, s2 / 2.0, s2 / 2.0, rng);
        const Slot noisy = synth.synthesize(-10.0 * std::log10(s2), seed);
        for (int r = 0; r < 4; ++r) {
            added += (z.antenna(r) - clean.y.antenna(r)).squaredNorm();
            floor += (noisy.y.antenna(r) - clean.y.antenna(r)).squaredNorm();
            n += z.antenna(r).size();
        }
    }
    CHECK(added / static_cast<double>(n) == doctest::Approx(floor / static_cast<double>(n)).epsilon(0.03));
}

TEST_CASE("perturbation descriptors") {
    CHECK(Perturbation::parse("none").kind == Perturbation::Kind::none);
    const auto c = Perturbation::parse("cfo:300");
    CHECK(c.kind == Perturbation::Kind::cfo);
    CHECK(c.a == 300.0);
    CHECK(c.describe() == "cfo:300");
    const auto a = Perturbation::parse("asym_noise:1,0.31622776601683794");
    CHECK(a.kind == Perturbation::Kind::asym_noise);
    CHECK(a.b == doctest::Approx(std::pow(10.0, -0.5)).epsilon(1e-15));
    CHECK(Perturbation::parse(a.describe()) == a);
    CHECK_THROWS_AS((void)Perturbation::parse("cfo:"), FormatError);
    CHECK_THROWS_AS((void)Perturbation::parse("asym_noise:1"), FormatError);
    CHECK_THROWS_AS((void)Perturbation::parse("phase_noise:1"), FormatError);

    const ReceivedGrid y = random_grid(9);
    Rng rng(1);
    CHECK(Perturbation{}.apply(y, rng) == y);
    CHECK(c.apply(y, rng) == apply_cfo(y, 300.0));
}
