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

#ifndef JCESD_RECEIVER_HPP
#define JCESD_RECEIVER_HPP

#include "jcesd/constellation.hpp"
#include "jcesd/types.hpp"

#include <string_view>

namespace jcesd {

enum class NoiseMode {
    known,      // receiver is told the true sigma^2
    estimated,  // sigma^2 comes from the pilot-based alternating estimator
};

[[nodiscard]] std::string_view to_string(NoiseMode m) noexcept;
[[nodiscard]] NoiseMode parse_noise_mode(std::string_view text);

enum class NoiseNormalization {
    // Divide the pilot residual energy by 2F. Unbiased only for Nr = 4.
    two_f,
    // Divide by Nr * (number of pilots); unbiased for any Nr.
    per_observation,
};

struct NoiseEstimatorConfig {
    double sigma2_init = 1.0;
    int max_iters = 10;
    // Stop once |delta sigma^2| / sigma^2 drops below this.
    double rel_tol = 1e-4;
    NoiseNormalization normalization = NoiseNormalization::two_f;
};

// Lower bound applied to every noise-variance estimate.
inline constexpr double kMinNoiseVariance = 1e-12;
inline constexpr int kMaxIterations = 64;
inline constexpr int kDefaultIterations = 6;

struct ReceiverConfig {
    int iterations = kDefaultIterations;
    NoiseMode noise_mode = NoiseMode::known;
    NoiseEstimatorConfig noise;
    CMatrix rf;  // F x F frequency correlation
    CMatrix rs;  // S x S time correlation

    void validate(const GridDims& dims) const;
};

struct ReceiverOutput {
    ChannelGrid h_est;
    CMatrix x_soft;  // MMSE output before projection
    BitGrid bits_hard;
    double sigma2_used = 0.0;
};

// -- Building blocks -------------------------------------------------------

// LS estimate at the pilots, (F/2) x Nr. Pilots must have unit modulus.
[[nodiscard]] CMatrix ls_pilot_estimate(const ReceivedGrid& y, const PilotPattern& pilots, const CVector& x_pilot);

// Wiener interpolation of the pilot column onto all F subcarriers (F x Nr).
[[nodiscard]] CMatrix wiener_interp_pilots(const CMatrix& h_ls, const CMatrix& rf, const PilotPattern& pilots,
                                           double sigma2);

// Copy the symbol-0 estimate to every OFDM symbol.
[[nodiscard]] ChannelGrid extrapolate_first_symbol(const CMatrix& h_col, int S);

// Per-RE SIMO MMSE: conj(h)^T y / (|h|^2 + sigma^2).
[[nodiscard]] CMatrix mmse_detect(const ChannelGrid& h_est, const ReceivedGrid& y, double sigma2);

// Decision-directed LS over the whole grid, Y ./ X_hat.
[[nodiscard]] ChannelGrid ls_full(const ReceivedGrid& y, const CMatrix& x_hat);

// Left-multiply every antenna plane by R_f (R_f + sigma^2 I)^{-1}.
[[nodiscard]] ChannelGrid wiener_freq(const ChannelGrid& h_ls, const CMatrix& rf, double sigma2);
// Right-multiply every antenna plane by R_s (R_s + sigma^2 I)^{-1}.
[[nodiscard]] ChannelGrid wiener_time(const ChannelGrid& h_half, const CMatrix& rs, double sigma2);

// Applies precomputed filters: W_f * H and H * W_s per antenna.
[[nodiscard]] ChannelGrid apply_freq_filter(const ChannelGrid& h, const CMatrix& w_freq);
[[nodiscard]] ChannelGrid apply_time_filter(const ChannelGrid& h, const CMatrix& w_time);

// Alternating pilot-domain estimate of sigma^2, clamped to >= kMinNoiseVariance.
[[nodiscard]] double estimate_noise_variance(const ReceivedGrid& y, const PilotPattern& pilots, const CVector& x_pilot,
                                             const CMatrix& rf, const NoiseEstimatorConfig& cfg = {});
// Pilot-domain form: y_pilot is P x Nr, r_pilot the P x P pilot correlation,
// F the full subcarrier count used by the 2F normalization.
[[nodiscard]] double estimate_noise_variance(const CMatrix& y_pilot, const CVector& x_pilot, const CMatrix& r_pilot,
                                             int F, const NoiseEstimatorConfig& cfg = {});

// -- Receivers -------------------------------------------------------------

// Filter matrices for one noise level. Immutable; share across threads.
struct WienerFilters {
    double sigma2 = 0.0;
    CMatrix interp;  // F x F/2
    CMatrix freq;    // F x F
    CMatrix time;    // S x S, applied on the right

    [[nodiscard]] static WienerFilters build(const CMatrix& rf, const CMatrix& rs, const PilotPattern& pilots,
                                             double sigma2);
};

[[nodiscard]] ReceiverOutput run_noniterative(const ReceivedGrid& y, const PilotPattern& pilots,
                                              const CVector& x_pilot, const WienerFilters& filters);

// Decision-directed JCESD: `iterations` passes of detect / project / LS /
// frequency filter / time filter, then a final detection. iterations = 0 is
// the non-iterative receiver.
[[nodiscard]] ReceiverOutput run_iterative(const ReceivedGrid& y, const PilotPattern& pilots, const CVector& x_pilot,
                                           const WienerFilters& filters, int iterations);

// Convenience forms resolving sigma^2 from the config: the known value in
// NoiseMode::known, the pilot estimate otherwise.
[[nodiscard]] double resolve_noise_variance(const ReceivedGrid& y, const PilotPattern& pilots, const CVector& x_pilot,
                                            const ReceiverConfig& cfg, double sigma2_known);
[[nodiscard]] ReceiverOutput run_noniterative(const ReceivedGrid& y, const PilotPattern& pilots,
                                              const CVector& x_pilot, const ReceiverConfig& cfg, double sigma2_known);
[[nodiscard]] ReceiverOutput run_iterative(const ReceivedGrid& y, const PilotPattern& pilots, const CVector& x_pilot,
                                           const ReceiverConfig& cfg, double sigma2_known);

}  // namespace jcesd

#endif  // JCESD_RECEIVER_HPP
