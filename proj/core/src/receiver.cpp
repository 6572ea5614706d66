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

#include "jcesd/receiver.hpp"

#include "jcesd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace jcesd {

namespace {

void require_noise_var(double sigma2, const char* what) {
    if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
        throw std::invalid_argument(std::string(what) + ": sigma^2 must be finite and >= 0");
    }
}

// Stage 0 shared by both receivers: LS at pilots, interpolate, extrapolate.
ChannelGrid initial_estimate(const ReceivedGrid& y, const PilotPattern& pilots, const CVector& x_pilot,
                             const CMatrix& w_interp) {
    const CMatrix h_ls = ls_pilot_estimate(y, pilots, x_pilot);
    if (w_interp.rows() != y.F() || w_interp.cols() != h_ls.rows()) {
        throw ShapeError("initial_estimate: interpolation filter does not match the grid");
    }
    return extrapolate_first_symbol(w_interp * h_ls, y.S());
}

ReceiverOutput finish(ChannelGrid h, const ReceivedGrid& y, double sigma2) {
    ReceiverOutput out;
    out.x_soft = mmse_detect(h, y, sigma2);
    out.bits_hard = symbols_to_bits(hard_project(out.x_soft));
    out.h_est = std::move(h);
    out.sigma2_used = sigma2;
    return out;
}

}  // namespace

std::string_view to_string(NoiseMode m) noexcept {
    return m == NoiseMode::known ? "known" : "estimated";
}

NoiseMode parse_noise_mode(std::string_view text) {
    if (text == "known") {
        return NoiseMode::known;
    }
    if (text == "estimated") {
        return NoiseMode::estimated;
    }
    throw FormatError("unknown noise mode '" + std::string(text) + "' (expected known or estimated)");
}

void ReceiverConfig::validate(const GridDims& dims) const {
    if (iterations < 0 || iterations > kMaxIterations) {
        throw std::invalid_argument("receiver config: iterations must be in [0, " + std::to_string(kMaxIterations) +
                                    "]");
    }
    if (!(noise.sigma2_init > 0.0)) {
        throw std::invalid_argument("receiver config: sigma2_init must be > 0");
    }
    if (noise.max_iters < 1) {
        throw std::invalid_argument("receiver config: noise estimator needs at least one iteration");
    }
    if (rf.rows() != dims.F || rf.cols() != dims.F) {
        throw ShapeError("receiver config: R_f must be F x F");
    }
    if (rs.rows() != dims.S || rs.cols() != dims.S) {
        throw ShapeError("receiver config: R_s must be S x S");
    }
}

CMatrix ls_pilot_estimate(const ReceivedGrid& y, const PilotPattern& pilots, const CVector& x_pilot) {
    if (pilots.num_subcarriers() != y.F()) {
        throw ShapeError("ls_pilot_estimate: pilot pattern does not match F");
    }
    if (x_pilot.size() != pilots.count()) {
        throw ShapeError("ls_pilot_estimate: wrong number of pilot symbols");
    }
    CMatrix h(pilots.count(), y.Nr());
    for (int k = 0; k < pilots.count(); ++k) {
        const cplx xp = x_pilot(k);
        if (std::abs(std::abs(xp) - 1.0) > 1e-9) {
            throw NumericError("ls_pilot_estimate: pilot " + std::to_string(k) + " does not have unit modulus");
        }
        const int f = pilots.subcarriers()[static_cast<std::size_t>(k)];
        for (int r = 0; r < y.Nr(); ++r) {
            h(k, r) = y(f, pilots.symbol_index(), r) * std::conj(xp);
        }
    }
    return h;
}

CMatrix wiener_interp_pilots(const CMatrix& h_ls, const CMatrix& rf, const PilotPattern& pilots, double sigma2) {
    require_noise_var(sigma2, "wiener_interp_pilots");
    if (h_ls.rows() != pilots.count() || rf.rows() != pilots.num_subcarriers()) {
        throw ShapeError("wiener_interp_pilots: shapes do not match the pilot pattern");
    }
    return wiener_interpolator(rf, pilots.subcarriers(), sigma2) * h_ls;
}

ChannelGrid extrapolate_first_symbol(const CMatrix& h_col, int S) {
    ChannelGrid h(static_cast<int>(h_col.rows()), S, static_cast<int>(h_col.cols()));
    for (int r = 0; r < h.Nr(); ++r) {
        h.antenna(r) = h_col.col(r).replicate(1, S);
    }
    return h;
}

CMatrix mmse_detect(const ChannelGrid& h_est, const ReceivedGrid& y, double sigma2) {
    require_noise_var(sigma2, "mmse_detect");
    require_same_shape(h_est.dims(), y.dims(), "mmse_detect");
    CMatrix x(y.F(), y.S());
    for (int f = 0; f < y.F(); ++f) {
        for (int s = 0; s < y.S(); ++s) {
            cplx num{0.0, 0.0};
            double gain = 0.0;
            for (int r = 0; r < y.Nr(); ++r) {
                const cplx h = h_est(f, s, r);
                num += std::conj(h) * y(f, s, r);
                gain += std::norm(h);
            }
            const double den = gain + sigma2;
            if (den < 1e-30) {
                throw NumericError("mmse_detect: degenerate channel at (" + std::to_string(f) + ", " +
                                   std::to_string(s) + ")");
            }
            x(f, s) = num / den;
        }
    }
    return x;
}

ChannelGrid ls_full(const ReceivedGrid& y, const CMatrix& x_hat) {
    if (x_hat.rows() != y.F() || x_hat.cols() != y.S()) {
        throw ShapeError("ls_full: symbol grid does not match received grid");
    }
    ChannelGrid h(y.F(), y.S(), y.Nr());
    for (int f = 0; f < y.F(); ++f) {
        for (int s = 0; s < y.S(); ++s) {
            const cplx xs = x_hat(f, s);
            if (xs == cplx(0.0, 0.0)) {
                throw NumericError("ls_full: zero symbol at (" + std::to_string(f) + ", " + std::to_string(s) + ")");
            }
            for (int r = 0; r < y.Nr(); ++r) {
                h(f, s, r) = y(f, s, r) / xs;
            }
        }
    }
    return h;
}

ChannelGrid apply_freq_filter(const ChannelGrid& h, const CMatrix& w_freq) {
    if (w_freq.rows() != h.F() || w_freq.cols() != h.F()) {
        throw ShapeError("apply_freq_filter: filter must be F x F");
    }
    ChannelGrid out(h.dims());
    for (int r = 0; r < h.Nr(); ++r) {
        out.antenna(r).noalias() = w_freq * h.antenna(r);
    }
    return out;
}

ChannelGrid apply_time_filter(const ChannelGrid& h, const CMatrix& w_time) {
    if (w_time.rows() != h.S() || w_time.cols() != h.S()) {
        throw ShapeError("apply_time_filter: filter must be S x S");
    }
    ChannelGrid out(h.dims());
    for (int r = 0; r < h.Nr(); ++r) {
        out.antenna(r).noalias() = h.antenna(r) * w_time;
    }
    return out;
}

ChannelGrid wiener_freq(const ChannelGrid& h_ls, const CMatrix& rf, double sigma2) {
    require_noise_var(sigma2, "wiener_freq");
    return apply_freq_filter(h_ls, wiener_smoother(rf, sigma2));
}

ChannelGrid wiener_time(const ChannelGrid& h_half, const CMatrix& rs, double sigma2) {
    require_noise_var(sigma2, "wiener_time");
    return apply_time_filter(h_half, wiener_smoother(rs, sigma2));
}

double estimate_noise_variance(const CMatrix& y_pilot, const CVector& x_pilot, const CMatrix& r_pilot, int F,
                               const NoiseEstimatorConfig& cfg) {
    if (!(cfg.sigma2_init > 0.0) || cfg.max_iters < 1) {
        throw std::invalid_argument("estimate_noise_variance: need sigma2_init > 0 and max_iters >= 1");
    }
    const auto P = y_pilot.rows();
    const auto Nr = y_pilot.cols();
    if (x_pilot.size() != P || r_pilot.rows() != P || r_pilot.cols() != P) {
        throw ShapeError("estimate_noise_variance: pilot-domain shapes disagree");
    }
    CMatrix h_ls(P, Nr);
    for (Eigen::Index i = 0; i < P; ++i) {
        if (std::abs(std::abs(x_pilot(i)) - 1.0) > 1e-9) {
            throw NumericError("estimate_noise_variance: pilot " + std::to_string(i) + " does not have unit modulus");
        }
        h_ls.row(i) = y_pilot.row(i) * std::conj(x_pilot(i));
    }

    const double norm = cfg.normalization == NoiseNormalization::two_f
                            ? 2.0 * F
                            : static_cast<double>(Nr) * static_cast<double>(P);
    double s2 = cfg.sigma2_init;
    for (int it = 0; it < cfg.max_iters; ++it) {
        const CMatrix h_hat = wiener_smoother(r_pilot, s2) * h_ls;
        double resid = 0.0;
        for (Eigen::Index i = 0; i < P; ++i) {
            for (Eigen::Index r = 0; r < Nr; ++r) {
                resid += std::norm(y_pilot(i, r) - h_hat(i, r) * x_pilot(i));
            }
        }
        const double next = std::max(resid / norm, kMinNoiseVariance);
        const double rel = std::abs(next - s2) / next;
        s2 = next;
        if (rel < cfg.rel_tol) {
            break;
        }
    }
    return s2;
}

double estimate_noise_variance(const ReceivedGrid& y, const PilotPattern& pilots, const CVector& x_pilot,
                               const CMatrix& rf, const NoiseEstimatorConfig& cfg) {
    if (rf.rows() != y.F() || rf.cols() != y.F() || pilots.num_subcarriers() != y.F()) {
        throw ShapeError("estimate_noise_variance: R_f and pilots must match F");
    }
    if (x_pilot.size() != pilots.count()) {
        throw ShapeError("estimate_noise_variance: wrong number of pilot symbols");
    }
    const int P = pilots.count();
    CMatrix rp(P, P);
    CMatrix y_p(P, y.Nr());
    for (int i = 0; i < P; ++i) {
        const int fi = pilots.subcarriers()[static_cast<std::size_t>(i)];
        for (int j = 0; j < P; ++j) {
            rp(i, j) = rf(fi, pilots.subcarriers()[static_cast<std::size_t>(j)]);
        }
        for (int r = 0; r < y.Nr(); ++r) {
            y_p(i, r) = y(fi, pilots.symbol_index(), r);
        }
    }
    return estimate_noise_variance(y_p, x_pilot, rp, y.F(), cfg);
}

WienerFilters WienerFilters::build(const CMatrix& rf, const CMatrix& rs, const PilotPattern& pilots, double sigma2) {
    require_noise_var(sigma2, "WienerFilters::build");
    if (rf.rows() != pilots.num_subcarriers()) {
        throw ShapeError("WienerFilters::build: R_f does not match the pilot pattern");
    }
    WienerFilters w;
    w.sigma2 = sigma2;
    w.interp = wiener_interpolator(rf, pilots.subcarriers(), sigma2);
    w.freq = wiener_smoother(rf, sigma2);
    w.time = wiener_smoother(rs, sigma2);
    return w;
}

ReceiverOutput run_noniterative(const ReceivedGrid& y, const PilotPattern& pilots, const CVector& x_pilot,
                                const WienerFilters& filters) {
    return finish(initial_estimate(y, pilots, x_pilot, filters.interp), y, filters.sigma2);
}

ReceiverOutput run_iterative(const ReceivedGrid& y, const PilotPattern& pilots, const CVector& x_pilot,
                             const WienerFilters& filters, int iterations) {
    if (iterations < 0 || iterations > kMaxIterations) {
        throw std::invalid_argument("run_iterative: iterations out of range");
    }
    ChannelGrid h = initial_estimate(y, pilots, x_pilot, filters.interp);
    for (int j = 0; j < iterations; ++j) {
        const CMatrix x_hat = hard_project(mmse_detect(h, y, filters.sigma2));
        h = apply_time_filter(apply_freq_filter(ls_full(y, x_hat), filters.freq), filters.time);
    }
    return finish(std::move(h), y, filters.sigma2);
}

double resolve_noise_variance(const ReceivedGrid& y, const PilotPattern& pilots, const CVector& x_pilot,
                              const ReceiverConfig& cfg, double sigma2_known) {
    if (cfg.noise_mode == NoiseMode::known) {
        require_noise_var(sigma2_known, "resolve_noise_variance");
        return sigma2_known;
    }
    return estimate_noise_variance(y, pilots, x_pilot, cfg.rf, cfg.noise);
}

ReceiverOutput run_noniterative(const ReceivedGrid& y, const PilotPattern& pilots, const CVector& x_pilot,
                                const ReceiverConfig& cfg, double sigma2_known) {
    cfg.validate(y.dims());
    const double s2 = resolve_noise_variance(y, pilots, x_pilot, cfg, sigma2_known);
    WienerFilters w;
    w.sigma2 = s2;
    w.interp = wiener_interpolator(cfg.rf, pilots.subcarriers(), s2);
    return run_noniterative(y, pilots, x_pilot, w);
}

ReceiverOutput run_iterative(const ReceivedGrid& y, const PilotPattern& pilots, const CVector& x_pilot,
                             const ReceiverConfig& cfg, double sigma2_known) {
    cfg.validate(y.dims());
    const double s2 = resolve_noise_variance(y, pilots, x_pilot, cfg, sigma2_known);
    return run_iterative(y, pilots, x_pilot, WienerFilters::build(cfg.rf, cfg.rs, pilots, s2), cfg.iterations);
}

}  // namespace jcesd
