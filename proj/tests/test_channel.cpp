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


#include "jcesd/channel.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace jcesd;
using testutil::max_abs_diff;

namespace {

// Power series J0(x) = sum_k (-1)^k (x/2)^{2k} / (k!)^2; accurate for the small
// arguments used here (x < 0.4).
double j0_series(double x) {
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 30; ++k) {
        term *= -(x / 2.0) * (x / 2.0) / (static_cast<double>(k) * k);
        sum += term;
    }
    return sum;
}

}  // namespace

TEST_CASE("symbol duration at 30 kHz") {
    CHECK(default_symbol_duration(30e3) == doctest::Approx(35.677083e-6).epsilon(1e-7));
}

TEST_CASE("time correlation follows the Jakes model") {
    ChannelParams p;
    p.doppler_hz = 150.0;
    const CVector d = jakes_time_corr(p);
    REQUIRE(d.size() == 12);
    CHECK(d(0) == cplx(1.0, 0.0));
    for (int k = 0; k < 12; ++k) {
        const double x = 2.0 * std::numbers::pi * 150.0 * k * p.symbol_duration_s;
        CHECK(d(k).real() == doctest::Approx(j0_series(x)).epsilon(1e-12));
        CHECK(d(k).imag() == 0.0);
    }
    p.doppler_hz = 0.0;
    CHECK(jakes_time_corr(p) == CVector::Ones(12));
}

TEST_CASE("frequency correlation of the exponential PDP") {
    ChannelParams p;
    const CVector c = exp_pdp_freq_corr(p);
    REQUIRE(c.size() == 24);
    CHECK(c(0) == cplx(1.0, 0.0));
    for (int k = 0; k < 24; ++k) {
        const double x = 2.0 * std::numbers::pi * k * 30e3 * 100e-9;
        // 1 / (1 + ix) = (1 - ix) / (1 + x^2)
        CHECK(c(k).real() == doctest::Approx(1.0 / (1.0 + x * x)).epsilon(1e-14));
        CHECK(c(k).imag() == doctest::Approx(-x / (1.0 + x * x)).epsilon(1e-14));
        CHECK(std::abs(c(k)) <= 1.0);
    }
}

TEST_CASE("iid model uses delta correlations") {
    ChannelParams p;
    p.model = ChannelModel::iid;
    const auto spec = correlation_for(p);
    const auto m = CorrelationMatrices::from(spec);
    CHECK(m.rf == CMatrix::Identity(24, 24));
    CHECK(m.rs == CMatrix::Identity(12, 12));
    CHECK(parse_channel_model("iid") == ChannelModel::iid);
    CHECK_THROWS_AS((void)parse_channel_model("eva"), FormatError);
}

TEST_CASE("correlation spec validation") {
    CorrelationSpec s{CVector::Ones(4), CVector::Ones(3)};
    CHECK_NOTHROW(s.validate());
    s.c(0) = 0.9;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.c(0) = 1.0;
    s.d(2) = 1.5;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("SNR to noise variance") {
    CHECK(sigma2_from_snr_db(0.0) == 1.0);
    CHECK(sigma2_from_snr_db(10.0) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(sigma2_from_snr_db(-10.0) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(sigma2_from_snr_db(std::numeric_limits<double>::infinity()) == 0.0);
    CHECK_THROWS((void)sigma2_from_snr_db(std::nan("")));
}

TEST_CASE("sampled channel covariance matches R_s (x) R_f") {
    // Small grid so the sample covariance converges quickly.
    ChannelParams p;
    p.F = 4;
    p.S = 3;
    p.Nr = 1;
    p.doppler_hz = 2000.0;
    p.delay_spread_s = 2e-6;
    const auto corr = CorrelationMatrices::from(correlation_for(p));
    const ChannelSampler sampler(corr.rf, corr.rs, 1);
    Rng rng(11);
    const int n = 40000;
    CMatrix cov = CMatrix::Zero(12, 12);
    for (int t = 0; t < n; ++t) {
        const ChannelGrid h = sampler.sample(rng);
        Eigen::VectorXcd v(12);
        for (int s = 0; s < 3; ++s) {
            for (int f = 0; f < 4; ++f) {
                v(s * 4 + f) = h(f, s, 0);
            }
        }
        cov += v * v.adjoint();
    }
    cov /= static_cast<double>(n);
    CMatrix expect(12, 12);
    for (int s1 = 0; s1 < 3; ++s1) {
        for (int s2 = 0; s2 < 3; ++s2) {
            expect.block(s1 * 4, s2 * 4, 4, 4) = corr.rs(s1, s2) * corr.rf;
        }
    }
    // Standard error of each entry is about 1/sqrt(n) = 0.005.
    CHECK(max_abs_diff(cov, expect) < 0.03);
}

TEST_CASE("slot synthesis: structure, determinism and matched seeds") {
    ChannelParams p;
    p.doppler_hz = 50.0;
    const SlotSynthesizer synth(p);
    const Slot a = synth.synthesize(10.0, 42);
    const Slot b = synth.synthesize(10.0, 42);
    CHECK(a.y == b.y);
    CHECK(a.h == b.h);
    CHECK(a.bits == b.bits);
    CHECK(a.sigma2 == doctest::Approx(0.1));

    // Pilots in place and X consistent with the bits.
    for (int k = 0; k < synth.pilots().count(); ++k) {
        CHECK(a.x(2 * k, 0) == synth.pilot_symbols()(k));
    }
    CHECK(symbols_to_bits(a.x) == a.bits);

    // Same seed at another SNR: same H, X, and a noise draw scaled by sigma.
    const Slot c = synth.synthesize(20.0, 42);
    CHECK(c.h == a.h);
    CHECK(c.x == a.x);
    const double ratio = std::sqrt(c.sigma2 / a.sigma2);
    for (int r = 0; r < 4; ++r) {
        const CMatrix na = a.y.antenna(r) - a.h.antenna(r).cwiseProduct(a.x);
        const CMatrix nc = c.y.antenna(r) - c.h.antenna(r).cwiseProduct(c.x);
        CHECK(max_abs_diff(nc, na * ratio) < 1e-12);
    }

    // Noiseless slot: Y = H o X exactly.
    const Slot q = synth.synthesize(std::numeric_limits<double>::infinity(), 42);
    CHECK(q.sigma2 == 0.0);
    for (int r = 0; r < 4; ++r) {
        CHECK(q.y.antenna(r) == q.h.antenna(r).cwiseProduct(q.x));
    }
}

TEST_CASE("noise power matches sigma^2") {
    ChannelParams p;
    p.model = ChannelModel::iid;
    const SlotSynthesizer synth(p);
    double acc = 0.0;
    std::int64_t n = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const Slot s = synth.synthesize(3.0, seed);
        for (int r = 0; r < 4; ++r) {
            acc += (s.y.antenna(r) - s.h.antenna(r).cwiseProduct(s.x)).squaredNorm();
            n += s.y.antenna(r).size();
        }
    }
    CHECK(acc / static_cast<double>(n) == doctest::Approx(sigma2_from_snr_db(3.0)).epsilon(0.02));
}

TEST_CASE("channel params validation") {
    ChannelParams p;
    p.F = 23;
    CHECK_THROWS_AS(p.validate(), ShapeError);
    p.F = 24;
    p.doppler_hz = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
