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


#include "jcesd/backbone.hpp"

#include "jcesd/channel.hpp"
#include "jcesd/linalg.hpp"
#include "jcesd/receiver.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

using namespace jcesd;
using testutil::max_abs_diff;

namespace {

BackboneParams identity_params(int F, int S, double v) {
    CorrelationSpec spec{CVector::Zero(F), CVector::Zero(S)};
    spec.c(0) = 1.0;
    spec.d(0) = 1.0;
    return BackboneParams::uniform(v, spec);
}

}  // namespace

TEST_CASE("operators with identity correlation are scalar") {
    BackboneParams p = identity_params(24, 12, 0.5);
    p.gamma[3] = 2.0;
    p.rho[1] = 3.0;
    const auto ops = build_operators(p, PilotPattern(24));
    CHECK(max_abs_diff(ops.w_freq[0], CMatrix::Identity(24, 24) / 1.25) < 1e-15);
    CHECK(max_abs_diff(ops.w_freq[2], CMatrix::Identity(24, 24) / 5.0) < 1e-15);
    CHECK(max_abs_diff(ops.w_time[1], CMatrix::Identity(12, 12) / 10.0) < 1e-15);
    CHECK(ops.w_interp.rows() == 24);
    CHECK(ops.w_interp.cols() == 12);
}

TEST_CASE("operators approach identity as gamma -> 0 and stay contractive") {
    ChannelParams cp;
    cp.delay_spread_s = 1e-6;
    cp.doppler_hz = 500.0;
    const CorrelationSpec spec = correlation_for(cp);
    const auto ops = build_operators(BackboneParams::uniform(1e-7, spec), PilotPattern(24));
    CHECK(max_abs_diff(ops.w_freq[0], CMatrix::Identity(24, 24)) < 1e-3);
    const auto wide = build_operators(BackboneParams::uniform(0.4, spec), PilotPattern(24));
    for (int i = 0; i < kBackboneLayers - 1; ++i) {
        CHECK(spectral_norm(wide.w_freq[static_cast<std::size_t>(i)]) <= 1.0 + 1e-12);
        CHECK(spectral_norm(wide.w_time[static_cast<std::size_t>(i)]) <= 1.0 + 1e-12);
    }
}

TEST_CASE("soft decision values") {
    CMatrix x(1, 3);
    x << cplx(0.0, 0.0), cplx(10.0, 10.0), cplx(0.1, 0.1);
    const CMatrix s = soft_decision(x);
    CHECK(s(0, 0) == cplx(0.0, 0.0));
    CHECK(std::abs(s(0, 1) - cplx(kHalfSqrt2, kHalfSqrt2)) < 1e-8);
    // tanh(1) = (e^2 - 1) / (e^2 + 1)
    const double e2 = std::exp(2.0);
    const double t1 = (e2 - 1.0) / (e2 + 1.0) * std::sqrt(2.0) / 2.0;
    CHECK(s(0, 2).real() == doctest::Approx(t1).epsilon(1e-14));
    CHECK(s(0, 2).imag() == doctest::Approx(0.53855).epsilon(1e-4));
}

TEST_CASE("soft decision agrees in sign with hard projection and is bounded") {
    const CMatrix x = CMatrix::Random(8, 8) * 4.0;
    const CMatrix s = soft_decision(x);
    const CMatrix h = hard_project(x);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        CHECK(std::abs(s(i).real()) <= kHalfSqrt2);
        CHECK(std::abs(s(i).imag()) <= kHalfSqrt2);
        if (x(i).real() != 0.0) {
            CHECK(sign_of(s(i).real()) == sign_of(h(i).real()));
        }
        if (std::abs(x(i).real()) >= 1.0 && std::abs(x(i).imag()) >= 1.0) {
            CHECK(hard_project(s(i)) == h(i));
        }
    }
}

TEST_CASE("forward pass: stage audit, determinism and shrinkage") {
    ChannelParams cp;
    cp.doppler_hz = 100.0;
    const SlotSynthesizer synth(cp);
    const Slot s = synth.synthesize(15.0, 3);
    BackboneParams p = BackboneParams::uniform(std::sqrt(s.sigma2), correlation_for(cp));
    const auto a = backbone_forward(s.y, synth.pilots(), synth.pilot_symbols(), p);
    const auto b = backbone_forward(s.y, synth.pilots(), synth.pilot_symbols(), p);
    CHECK(a.x_soft == b.x_soft);
    CHECK(a.h_est == b.h_est);
    CHECK(a.trace.interpolations == 1);
    CHECK(a.trace.detections == 6);
    CHECK(a.trace.freq_filters == 5);
    CHECK(a.trace.time_filters == 5);
    CHECK(a.trace.min_soft_input >= 0.0);

    p.sigma[5] = 1e8;
    const auto z = backbone_forward(s.y, synth.pilots(), synth.pilot_symbols(), p);
    CHECK(z.x_soft.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(z.h_est == a.h_est);
}

TEST_CASE("saturated forward pass reproduces the iterative receiver") {
    ChannelParams cp;
    cp.doppler_hz = 10.0;
    const SlotSynthesizer synth(cp);
    const auto& c = synth.correlation();
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Slot s = synth.synthesize(30.0, seed);
        const auto p = BackboneParams::uniform(std::sqrt(s.sigma2), correlation_for(cp));
        const auto bb = backbone_forward(s.y, synth.pilots(), synth.pilot_symbols(), p);
        if (bb.trace.min_soft_input < 0.35) {
            continue;
        }
        const auto w = WienerFilters::build(c.rf, c.rs, synth.pilots(), s.sigma2);
        const auto it = run_iterative(s.y, synth.pilots(), synth.pilot_symbols(), w, 5);
        CHECK(symbols_to_bits(hard_project(bb.x_soft)) == it.bits_hard);
        ++checked;
    }
    CHECK(checked >= 5);
}

TEST_CASE("parameter validation") {
    BackboneParams p = identity_params(24, 12, 0.3);
    CHECK_NOTHROW(p.validate(24, 12));
    CHECK_THROWS_AS(p.validate(22, 12), ShapeError);
    p.rho[4] = 0.0;
    CHECK_THROWS_AS(p.validate(24, 12), std::invalid_argument);
    p.rho[4] = 0.3;
    p.c(0) = 0.5;
    CHECK_THROWS_AS(p.validate(24, 12), std::invalid_argument);
}

TEST_CASE("parameter file round trip") {
    ChannelParams cp;
    cp.doppler_hz = 70.0;
    BackboneParams p = BackboneParams::uniform(0.1, correlation_for(cp));
    for (int i = 0; i < kBackboneLayers; ++i) {
        p.gamma[static_cast<std::size_t>(i)] = 0.1 + 0.01 * i + 1e-17;
        p.sigma[static_cast<std::size_t>(i)] = 1.0 / (3.0 + i);
    }
    p.rho[2] = 2.0 / 3.0;
    std::stringstream ss;
    write_params(ss, p);
    const BackboneParams q = read_params(ss);
    CHECK(q == p);

    const auto path = testutil::tmp_path("params_roundtrip.txt");
    save_params(p, path);
    CHECK(load_params(path) == p);
    CHECK_THROWS_AS((void)load_params(testutil::tmp_path("does_not_exist.txt")), IoError);
}

TEST_CASE("parameter file diagnostics") {
    const BackboneParams p = identity_params(24, 12, 0.2);
    std::stringstream ss;
    write_params(ss, p);
    const std::string text = ss.str();

    // Drop one rho value: 16 scalars instead of 17.
    std::string short_rho = text;
    const auto pos = short_rho.find("rho = ");
    const auto end = short_rho.find('\n', pos);
    short_rho.replace(pos, end - pos, "rho = 0.2 0.2 0.2 0.2");
    std::istringstream a(short_rho);
    try {
        (void)read_params(a);
        FAIL("expected a parse error");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("'rho'") != std::string::npos);
        CHECK(std::string(e.what()).find("line") != std::string::npos);
    }

    std::string missing = text;
    const auto sp = missing.find("sigma = ");
    missing.erase(sp, missing.find('\n', sp) - sp + 1);
    std::istringstream b(missing);
    try {
        (void)read_params(b);
        FAIL("expected a parse error");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("'sigma'") != std::string::npos);
    }

    // c of length 23 while F = 24.
    std::string bad_c = text;
    const auto cp = bad_c.find("c_re = ");
    const auto ce = bad_c.find('\n', cp);
    bad_c.replace(cp, ce - cp, bad_c.substr(cp, bad_c.rfind(' ', ce - 1) - cp));
    std::istringstream c(bad_c);
    CHECK_THROWS_AS((void)read_params(c), ShapeError);

    std::istringstream d("version = 1\nF = 24\nfoo = 3\n");
    CHECK_THROWS_AS((void)read_params(d), FormatError);
}
