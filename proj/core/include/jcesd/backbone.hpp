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


#ifndef JCESD_BACKBONE_HPP
#define JCESD_BACKBONE_HPP

#include "jcesd/channel.hpp"
#include "jcesd/constellation.hpp"
#include "jcesd/types.hpp"

#include <array>
#include <filesystem>
#include <iosfwd>

namespace jcesd {

inline constexpr int kBackboneLayers = 6;
inline constexpr int kBackboneFormatVersion = 1;
inline constexpr double kSoftSlope = 10.0;

// Per-stage noise parameters of the unrolled receiver plus the correlation
// coefficients its Wiener operators are built from. Consumption order is
// gamma1, sigma1, gamma2, rho1, ..., sigma6.
struct BackboneParams {
    std::array<double, kBackboneLayers> gamma{};
    std::array<double, kBackboneLayers> sigma{};
    std::array<double, kBackboneLayers - 1> rho{};
    CVector c;  // length F
    CVector d;  // length S

    // Every scalar finite and > 0, c[0] = d[0] = 1, lengths F and S.
    void validate(int F, int S) const;

    // All 17 scalars set to `noise_std`, correlations from `spec`.
    [[nodiscard]] static BackboneParams uniform(double noise_std, const CorrelationSpec& spec);

    friend bool operator==(const BackboneParams&, const BackboneParams&) = default;
};

struct WienerOperatorSet {
    CMatrix w_interp;                                   // F x F/2
    std::array<CMatrix, kBackboneLayers - 1> w_freq;    // F x F, left-multiplied
    std::array<CMatrix, kBackboneLayers - 1> w_time;    // S x S, right-multiplied
};

[[nodiscard]] WienerOperatorSet build_operators(const BackboneParams& params, const PilotPattern& pilots);

// (tanh(k Re x) + i tanh(k Im x)) / sqrt2, elementwise.
[[nodiscard]] CMatrix soft_decision(const CMatrix& x, double slope = kSoftSlope);

struct StageTrace {
    int interpolations = 0;
    int detections = 0;
    int freq_filters = 0;
    int time_filters = 0;
    // Smallest |Re| or |Im| seen at the input of any soft decision.
    double min_soft_input = 0.0;
};

struct BackboneOutput {
    CMatrix x_soft;
    ChannelGrid h_est;
    StageTrace trace;
};

[[nodiscard]] BackboneOutput backbone_forward(const ReceivedGrid& y, const PilotPattern& pilots, const CVector& x_pilot,
                                              const BackboneParams& params, const WienerOperatorSet& ops,
                                              double slope = kSoftSlope);
[[nodiscard]] BackboneOutput backbone_forward(const ReceivedGrid& y, const PilotPattern& pilots, const CVector& x_pilot,
                                              const BackboneParams& params);

// Text parameter file. One `key = values...` line per field, '#' comments:
//   version, F, S, L, gamma[L], sigma[L], rho[L-1], c_re[F], c_im[F], d_re[S], d_im[S]
// Values are written with 17 significant digits so the round trip is exact.
void write_params(std::ostream& os, const BackboneParams& params);
[[nodiscard]] BackboneParams read_params(std::istream& is);
void save_params(const BackboneParams& params, const std::filesystem::path& path);
[[nodiscard]] BackboneParams load_params(const std::filesystem::path& path);

}  // namespace jcesd

#endif  // JCESD_BACKBONE_HPP
