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

#include "jcesd/linalg.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace jcesd {

void CorrelationSpec::validate() const {
    if (c.size() == 0 || d.size() == 0) {
        throw ShapeError("correlation spec: c and d must be non-empty");
    }
    auto check = [](const CVector& v, const char* name) {
        if (std::abs(v(0) - cplx(1.0, 0.0)) > 1e-12) {
            throw std::invalid_argument(std::string("correlation spec: ") + name + "[0] must equal 1");
        }
        for (Eigen::Index k = 0; k < v.size(); ++k) {
            if (!std::isfinite(v(k).real()) || !std::isfinite(v(k).imag()) || std::abs(v(k)) > 1.0 + 1e-12) {
                throw std::invalid_argument(std::string("correlation spec: |") + name + "[" + std::to_string(k) +
                                            "]| must be finite and <= 1");
            }
        }
    };
    check(c, "c");
    check(d, "d");
}

std::string_view to_string(ChannelModel m) noexcept {
    switch (m) {
        case ChannelModel::kronecker:
            return "kronecker";
        case ChannelModel::iid:
            return "iid";
    }
    return "unknown";
}

ChannelModel parse_channel_model(std::string_view text) {
    if (text == "kronecker") {
        return ChannelModel::kronecker;
    }
    if (text == "iid") {
        return ChannelModel::iid;
    }
    throw FormatError("unknown channel model '" + std::string(text) + "' (expected kronecker or iid)");
}

void ChannelParams::validate() const {
    if (F <= 0 || S <= 0 || Nr <= 0) {
        throw ShapeError("channel params: F, S, Nr must be positive");
    }
    if (F % 2 != 0) {
        throw ShapeError("channel params: F must be even for the pilot pattern");
    }
    if (!(doppler_hz >= 0.0) || !(delay_spread_s >= 0.0) || !(subcarrier_spacing_hz >= 0.0) ||
        !(symbol_duration_s >= 0.0)) {
        throw std::invalid_argument("channel params: physical quantities must be nonnegative");
    }
}

CVector jakes_time_corr(const ChannelParams& params) {
    if (!(params.doppler_hz >= 0.0)) {
        throw std::invalid_argument("jakes_time_corr: doppler must be >= 0");
    }
    CVector d(params.S);
    for (int k = 0; k < params.S; ++k) {
        const double arg = 2.0 * std::numbers::pi * params.doppler_hz * k * params.symbol_duration_s;
        d(k) = cplx(std::cyl_bessel_j(0.0, arg), 0.0);
    }
    d(0) = cplx(1.0, 0.0);
    return d;
}

CVector exp_pdp_freq_corr(const ChannelParams& params) {
    if (!(params.delay_spread_s >= 0.0)) {
        throw std::invalid_argument("exp_pdp_freq_corr: delay spread must be >= 0");
    }
    CVector c(params.F);
    for (int k = 0; k < params.F; ++k) {
        const double x = 2.0 * std::numbers::pi * k * params.subcarrier_spacing_hz * params.delay_spread_s;
        c(k) = 1.0 / cplx(1.0, x);
    }
    return c;
}

CorrelationSpec correlation_for(const ChannelParams& params) {
    params.validate();
    if (params.model == ChannelModel::iid) {
        CorrelationSpec spec{CVector::Zero(params.F), CVector::Zero(params.S)};
        spec.c(0) = 1.0;
        spec.d(0) = 1.0;
        return spec;
    }
    return {exp_pdp_freq_corr(params), jakes_time_corr(params)};
}

CorrelationMatrices CorrelationMatrices::from(const CorrelationSpec& spec) {
    spec.validate();
    return {enforce_psd(toeplitz_hermitian(spec.c)), enforce_psd(toeplitz_hermitian(spec.d))};
}

ChannelSampler::ChannelSampler(const CMatrix& rf, const CMatrix& rs, int Nr)
    : af_(psd_factor(rf)), as_(psd_factor(rs)), nr_(Nr) {
    if (Nr <= 0) {
        throw ShapeError("channel sampler: Nr must be positive");
    }
}

ChannelGrid ChannelSampler::sample(Rng& rng) const {
    const auto F = static_cast<int>(af_.rows());
    const auto S = static_cast<int>(as_.rows());
    ChannelGrid h(F, S, nr_);
    CMatrix g(F, S);
    for (int r = 0; r < nr_; ++r) {
        for (int f = 0; f < F; ++f) {
            for (int s = 0; s < S; ++s) {
                g(f, s) = complex_normal(rng, 1.0);
            }
        }
        // vec(A_f G A_s^T) = (A_s (x) A_f) vec(G)  =>  covariance R_s (x) R_f.
        h.antenna(r).noalias() = af_ * g * as_.transpose();
    }
    return h;
}

ChannelGrid sample_channel(const CMatrix& rf, const CMatrix& rs, int Nr, Rng& rng) {
    return ChannelSampler(rf, rs, Nr).sample(rng);
}

double sigma2_from_snr_db(double snr_db) {
    if (std::isnan(snr_db)) {
        throw std::invalid_argument("snr_db is NaN");
    }
    if (snr_db == std::numeric_limits<double>::infinity()) {
        return 0.0;
    }
    return std::pow(10.0, -snr_db / 10.0);
}

SlotSynthesizer::SlotSynthesizer(const ChannelParams& params)
    : SlotSynthesizer(params, default_pilot_sequence(params.F / 2)) {}

SlotSynthesizer::SlotSynthesizer(const ChannelParams& params, CVector x_pilot)
    : params_(params),
      pilots_(params.F),
      x_pilot_(std::move(x_pilot)),
      corr_(CorrelationMatrices::from(correlation_for(params))),
      sampler_(corr_.rf, corr_.rs, params.Nr) {
    if (x_pilot_.size() != pilots_.count()) {
        throw ShapeError("slot synthesizer: pilot sequence length does not match the pilot pattern");
    }
}

Slot SlotSynthesizer::synthesize(double snr_db, std::uint64_t seed) const {
    const int F = params_.F;
    const int S = params_.S;
    const int Nr = params_.Nr;

    Slot slot;
    slot.snr_db = snr_db;
    slot.sigma2 = sigma2_from_snr_db(snr_db);
    slot.doppler_hz = params_.doppler_hz;
    slot.seed = seed;

    // Stream order: bits (f, s, d), channel (r, f, s), noise (f, s, r).
    Rng rng(seed);
    slot.bits = BitGrid(F, S);
    for (auto& b : slot.bits.raw()) {
        b = static_cast<std::uint8_t>(rng() >> 63U);
    }
    for (int k = 0; k < pilots_.count(); ++k) {
        const auto bp = symbol_to_bits(x_pilot_(k));
        const int f = pilots_.subcarriers()[static_cast<std::size_t>(k)];
        slot.bits(f, pilots_.symbol_index(), 0) = bp.b0;
        slot.bits(f, pilots_.symbol_index(), 1) = bp.b1;
    }
    slot.x = bits_to_symbols(slot.bits);
    for (int k = 0; k < pilots_.count(); ++k) {
        slot.x(pilots_.subcarriers()[static_cast<std::size_t>(k)], pilots_.symbol_index()) = x_pilot_(k);
    }

    slot.h = sampler_.sample(rng);

    const double sigma = std::sqrt(slot.sigma2);
    slot.y = ReceivedGrid(F, S, Nr);
    for (int f = 0; f < F; ++f) {
        for (int s = 0; s < S; ++s) {
            for (int r = 0; r < Nr; ++r) {
                const cplx n = complex_normal(rng, 1.0);
                slot.y(f, s, r) = slot.h(f, s, r) * slot.x(f, s) + sigma * n;
            }
        }
    }
    return slot;
}

Slot synthesize_slot(const ChannelParams& params, double snr_db, std::uint64_t seed) {
    return SlotSynthesizer(params).synthesize(snr_db, seed);
}

}  // namespace jcesd
