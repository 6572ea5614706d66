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

#ifndef JCESD_CHANNEL_HPP
#define JCESD_CHANNEL_HPP

#include "jcesd/constellation.hpp"
#include "jcesd/rng.hpp"
#include "jcesd/types.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace jcesd {

// Frequency (c, length F) and time (d, length S) correlation coefficients.
// R_f = Toeplitz(c^H, c), R_s = Toeplitz(d^H, d).
struct CorrelationSpec {
    CVector c;
    CVector d;

    // c[0] = d[0] = 1 and every |coefficient| <= 1.
    void validate() const;
};

enum class ChannelModel {
    kronecker,  // Jakes time correlation x exponential-PDP frequency correlation
    iid,        // c = d = delta: i.i.d. Rayleigh per resource element
};

[[nodiscard]] std::string_view to_string(ChannelModel m) noexcept;
[[nodiscard]] ChannelModel parse_channel_model(std::string_view text);

// OFDM symbol duration including cyclic prefix: 2192 samples at 2048/scs.
[[nodiscard]] constexpr double default_symbol_duration(double subcarrier_spacing_hz) noexcept {
    return 2192.0 / (2048.0 * subcarrier_spacing_hz);
}

struct ChannelParams {
    ChannelModel model = ChannelModel::kronecker;
    double doppler_hz = 0.0;
    double delay_spread_s = 100e-9;
    double subcarrier_spacing_hz = 30e3;
    double symbol_duration_s = default_symbol_duration(30e3);
    int F = 24;
    int S = 12;
    int Nr = 4;

    [[nodiscard]] GridDims dims() const noexcept { return {F, S, Nr}; }
    void validate() const;
};

// d[k] = J0(2 pi f_D k T).
[[nodiscard]] CVector jakes_time_corr(const ChannelParams& params);
// c[k] = 1 / (1 + i 2 pi k df tau_rms).
[[nodiscard]] CVector exp_pdp_freq_corr(const ChannelParams& params);

[[nodiscard]] CorrelationSpec correlation_for(const ChannelParams& params);

// R_f and R_s built from a correlation spec (Toeplitz, PSD-enforced).
struct CorrelationMatrices {
    CMatrix rf;
    CMatrix rs;

    [[nodiscard]] static CorrelationMatrices from(const CorrelationSpec& spec);
};

// Draws H with vec(H_i) ~ CN(0, R_s (x) R_f), i.i.d. over antennas.
// Holds the square-root factors so repeated draws skip the eigensolves.
class ChannelSampler {
  public:
    ChannelSampler(const CMatrix& rf, const CMatrix& rs, int Nr);

    [[nodiscard]] ChannelGrid sample(Rng& rng) const;
    [[nodiscard]] const CMatrix& freq_factor() const noexcept { return af_; }
    [[nodiscard]] const CMatrix& time_factor() const noexcept { return as_; }

  private:
    CMatrix af_;
    CMatrix as_;
    int nr_;
};

[[nodiscard]] ChannelGrid sample_channel(const CMatrix& rf, const CMatrix& rs, int Nr, Rng& rng);

// sigma^2 = 10^(-snr/10); +inf dB maps to exactly 0.
[[nodiscard]] double sigma2_from_snr_db(double snr_db);

// One simulated transmission.
struct Slot {
    CMatrix x;  // F x S transmitted QPSK grid (pilots included)
    BitGrid bits;
    ChannelGrid h;
    ReceivedGrid y;
    double sigma2 = 0.0;
    double snr_db = 0.0;
    double doppler_hz = 0.0;
    std::uint64_t seed = 0;

    [[nodiscard]] GridDims dims() const noexcept { return h.dims(); }
};

// Synthesizes slots for one channel configuration. Every slot is a pure
// function of (params, snr_db, seed, pilots): bits, channel and a unit-variance
// noise draw come from one stream keyed by `seed`, and the noise is scaled by
// sigma. Slots with the same seed at different SNRs share H, X and noise shape.
class SlotSynthesizer {
  public:
    explicit SlotSynthesizer(const ChannelParams& params);
    SlotSynthesizer(const ChannelParams& params, CVector x_pilot);

    [[nodiscard]] Slot synthesize(double snr_db, std::uint64_t seed) const;

    [[nodiscard]] const ChannelParams& params() const noexcept { return params_; }
    [[nodiscard]] const PilotPattern& pilots() const noexcept { return pilots_; }
    [[nodiscard]] const CVector& pilot_symbols() const noexcept { return x_pilot_; }
    [[nodiscard]] const CorrelationMatrices& correlation() const noexcept { return corr_; }

  private:
    ChannelParams params_;
    PilotPattern pilots_;
    CVector x_pilot_;
    CorrelationMatrices corr_;
    ChannelSampler sampler_;
};

[[nodiscard]] Slot synthesize_slot(const ChannelParams& params, double snr_db, std::uint64_t seed);

}  // namespace jcesd

#endif  // JCESD_CHANNEL_HPP
